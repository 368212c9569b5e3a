import random

import pytest

import brute
from exchange_ge import (
    ElementaryOp,
    GEDecomposition,
    Mat,
    Transcript,
    apply_transcript,
    invert,
    move_entry,
    preset,
    replay_check,
    signed_swap_transcript,
)
from exchange_ge.errors import BadIndex, DimensionMismatch, MixedRings
from exchange_ge.matrices import (
    COL,
    ROW,
    determinant,
    elementary_group,
    general_linear_group,
    random_matrix,
)

TEST_RINGS = ["Z/6", "F4", "M2(F2)", "UT2(F2)", "Ex2.12(F2)", "Z/6 x F2"]


def coords(A: Mat):
    return [[x.coords for x in row] for row in A.entries()]


def random_transcript(ring, rows, cols, rng, length):
    ops = []
    for _ in range(length):
        side = rng.choice((ROW, COL))
        n = rows if side == ROW else cols
        i, j = rng.sample(range(n), 2)
        ops.append(ElementaryOp(side, i, j, ring.at(rng.randrange(ring.size))))
    return Transcript(ring, rows, cols, tuple(ops))


def brute_product(ring, A, T):
    """``E_T A F_T`` from explicit transvection matrices and naive products."""
    M = coords(A)
    for op in T.ops:
        if op.side == ROW:
            M = brute.mat_mul(ring, brute.transvection(ring, A.rows, op.i, op.j, op.r.coords), M)
        else:
            M = brute.mat_mul(ring, M, brute.transvection(ring, A.cols, op.j, op.i, op.r.coords))
    return M


@pytest.mark.parametrize("name", TEST_RINGS)
def test_replay_equals_transvection_products(name):
    R = preset(name)
    rng = random.Random(f"replay-{name}")
    for _ in range(500):
        rows, cols = rng.choice([(2, 2), (2, 3), (3, 2), (3, 3)])
        A = random_matrix(R, rows, cols, rng)
        T = random_transcript(R, rows, cols, rng, rng.randrange(0, 6))
        assert coords(apply_transcript(A, T)) == brute_product(R, A, T)


@pytest.mark.parametrize("name", TEST_RINGS)
def test_left_and_right_matrices(name):
    R = preset(name)
    rng = random.Random(name)
    for _ in range(50):
        A = random_matrix(R, 2, 3, rng)
        T = random_transcript(R, 2, 3, rng, 5)
        assert apply_transcript(A, T) == T.left_matrix() @ A @ T.right_matrix()


@pytest.mark.parametrize("name", TEST_RINGS)
def test_op_then_negation_restores(name):
    R = preset(name)
    rng = random.Random(7)
    for _ in range(200):
        A = random_matrix(R, 3, 3, rng)
        T = random_transcript(R, 3, 3, rng, 1)
        op = T.ops[0]
        back = Transcript(R, 3, 3, (op, op.negated()))
        assert apply_transcript(A, back) == A
        assert apply_transcript(apply_transcript(A, T), T.inverse()) == A


def test_empty_transcript():
    R = preset("Z/6")
    A = Mat.from_coords(R, [[1, 2], [3, 4]])
    assert apply_transcript(A, Transcript(R, 2, 2)) == A


def test_single_transvection_over_z5():
    R = preset("Z/5")
    T = Transcript(R, 2, 2, (ElementaryOp(ROW, 0, 1, R.element(2)),))
    assert apply_transcript(Mat.identity(R, 2), T) == Mat.from_coords(R, [[1, 2], [0, 1]])


class TestSignedSwap:
    @pytest.mark.parametrize("n", [2, 3, 5, 6])
    def test_rotation(self, n):
        R = preset(f"Z/{n}")
        T = signed_swap_transcript(R, 2, 0, 1, ROW)
        assert len(T) == 3
        got = apply_transcript(Mat.identity(R, 2), T)
        assert got == Mat.from_coords(R, [[0, 1], [n - 1, 0]])

    def test_characteristic_two(self):
        R = preset("F2")
        got = apply_transcript(Mat.identity(R, 2), signed_swap_transcript(R, 2, 0, 1))
        assert got == Mat.from_coords(R, [[0, 1], [1, 0]])

    @pytest.mark.parametrize("name", TEST_RINGS)
    @pytest.mark.parametrize("side", [ROW, COL])
    def test_twice_negates_the_two_lines(self, name, side):
        R = preset(name)
        rng = random.Random(3)
        A = random_matrix(R, 3, 3, rng)
        T = signed_swap_transcript(R, 3, 0, 2, side)
        twice = apply_transcript(A, T.then(T))
        D = Mat.diagonal_of(R, [-R.one, R.one, -R.one])
        assert twice == (D @ A if side == ROW else A @ D)

    def test_bad_indices(self):
        with pytest.raises(BadIndex):
            signed_swap_transcript(preset("Z/6"), 2, 1, 1)


class TestMoveEntry:
    def test_identity_move(self):
        A = Mat.from_coords(preset("Z/6"), [[1, 2], [3, 4]])
        assert len(move_entry(A, (0, 0), (0, 0))) == 0

    def test_one_swap(self):
        A = Mat.from_coords(preset("Z/6"), [[1, 2], [3, 4]])
        T = move_entry(A, (0, 1), (0, 0))
        assert len(T) == 3 and {op.side for op in T} == {COL}
        assert apply_transcript(A, T)[0, 0] == A[0, 1]

    def test_two_swaps(self):
        A = Mat.from_coords(preset("Z/6"), [[1, 2], [3, 5]])
        T = move_entry(A, (1, 1), (0, 0))
        assert len(T) == 6
        assert apply_transcript(A, T)[0, 0] == A[1, 1]

    def test_all_positions_3x3(self):
        R = preset("M2(F2)")
        A = random_matrix(R, 3, 3, random.Random(1))
        for src in [(i, j) for i in range(3) for j in range(3)]:
            for dst in [(i, j) for i in range(3) for j in range(3)]:
                assert apply_transcript(A, move_entry(A, src, dst))[dst] == A[src]


class TestInvert:
    def test_identity(self):
        R = preset("M2(F2)")
        assert invert(Mat.identity(R, 3)) == Mat.identity(R, 3)

    def test_transvection(self):
        R = preset("Z/6")
        assert invert(Mat.from_coords(R, [[1, 1], [0, 1]])) == Mat.from_coords(R, [[1, 5], [0, 1]])

    @pytest.mark.parametrize("name", ["F2", "F4", "Z/6"])
    def test_singular(self, name):
        R = preset(name)
        assert invert(Mat.from_coords(R, [[1, 1], [0, 0]] if R.d == 1 else [[R.one.coords] * 2, [R.zero.coords] * 2])) is None

    @pytest.mark.parametrize("name", ["F2", "Z/4", "UT2(F2)"])
    def test_against_exhaustive_inverse_search(self, name):
        R = preset(name)
        els = brute.all_coords(R)
        ident = brute.mat_identity(R, 2)
        count = 0
        for a in els:
            for b in els:
                for c in els:
                    for d in els:
                        M = [[a, b], [c, d]]
                        inv = invert(Mat.from_coords(R, M))
                        if inv is not None:
                            count += 1
                            X = coords(inv)
                            assert brute.mat_mul(R, M, X) == ident == brute.mat_mul(R, X, M)
        assert count == brute.gl2_count(R)

    def test_not_square(self):
        with pytest.raises(DimensionMismatch):
            invert(Mat.zeros(preset("Z/6"), 2, 3))


class TestGroups:
    def test_gl2_z6_order(self):
        # 6 * 48 by the Chinese remainder theorem
        assert len(general_linear_group(preset("Z/6"), 2)) == 288

    def test_gl2_f4_order(self):
        assert len(general_linear_group(preset("F4"), 2)) == (16 - 1) * (16 - 4)

    def test_gl2_matches_brute_count(self):
        R = preset("Z/4")
        assert len(general_linear_group(R, 2)) == brute.gl2_count(R)

    def test_determinant_z6(self):
        R = preset("Z/6")
        assert determinant(Mat.from_coords(R, [[3, 4], [4, 3]])) == R.element(5)

    def test_elementary_group_f2(self):
        # over a field E_2 = SL_2, and SL_2(F2) = GL_2(F2) has order 6
        assert len(elementary_group(preset("F2"), 2)) == 6


class TestReplayCheck:
    def _decomp(self):
        R = preset("Z/6")
        A = Mat.from_coords(R, [[0, 1], [5, 0]])
        T = signed_swap_transcript(R, 2, 0, 1, ROW).inverse()
        return R, A, GEDecomposition(A, T, Transcript(R, 2, 2), Mat.identity(R, 2), (R.one, R.one))

    def test_ok(self):
        _, A, dec = self._decomp()
        assert replay_check(dec).ok

    def test_deleted_op_reports_position(self):
        R, A, dec = self._decomp()
        broken = GEDecomposition(A, Transcript(R, 2, 2, dec.left.ops[1:]), dec.right, dec.D, dec.inverses)
        v = replay_check(broken)
        assert not v.ok and v.position is not None

    def test_non_unit_diagonal(self):
        R = preset("Z/6")
        D = Mat.diagonal_of(R, [R.element(3), R.one])
        dec = GEDecomposition(D, Transcript(R, 2, 2), Transcript(R, 2, 2), D, (R.one, R.one))
        assert not replay_check(dec).ok

    def test_wrong_side_in_left(self):
        R, A, dec = self._decomp()
        bad_left = Transcript(R, 2, 2, (ElementaryOp(COL, 0, 1, R.zero),) + dec.left.ops)
        assert not replay_check(GEDecomposition(A, bad_left, dec.right, dec.D, dec.inverses)).ok

    def test_mixed_rings(self):
        R = preset("Z/6")
        with pytest.raises(MixedRings):
            apply_transcript(Mat.identity(R, 2), Transcript(preset("Z/5"), 2, 2))
        with pytest.raises(DimensionMismatch):
            apply_transcript(Mat.identity(R, 2), Transcript(R, 3, 3))


class TestMat:
    def test_block_diag_and_transpose(self):
        R = preset("UT2(F2)")
        rng = random.Random(0)
        A, B = random_matrix(R, 2, 2, rng), random_matrix(R, 1, 1, rng)
        C = Mat.block_diag(A, B)
        assert C.shape == (3, 3) and C[2, 2] == B[0, 0] and C[0, 2].is_zero()
        # transpose over the opposite ring reverses products
        X, Y = random_matrix(R, 2, 2, rng), random_matrix(R, 2, 2, rng)
        assert (X @ Y).transpose_op() == Y.transpose_op() @ X.transpose_op()

    def test_immutable_hashable(self):
        R = preset("Z/6")
        A = Mat.from_coords(R, [[1, 2], [3, 4]])
        assert hash(A) == hash(Mat.from_coords(R, [[1, 2], [3, 4]]))
