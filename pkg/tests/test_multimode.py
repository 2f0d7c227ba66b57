import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bosonspec import fock
from bosonspec.forms import MultiModeForm, OneModeForm, embed_one_mode
from bosonspec.multimode import (
    NonDiagonalizableError,
    build_w,
    commutator_matrix_nd,
    decompose,
    detect_jordan,
    eigen_pairs,
    form_from_commutator,
    random_symplectic,
    vacuum_existence,
    w_residuals,
    _rm,
)
from bosonspec.normal_modes import bogoliubov, classify, commutator_matrix, lambda_of

from helpers import random_forms


def random_nd(n, rng, scale=1.0):
    def c():
        return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))

    B1, B2 = c(), c()
    return MultiModeForm(scale * c(), scale * (B1 + B1.T) / 2, scale * (B2 + B2.T) / 2)


def random_stable_hermitian(n, rng):
    # positive-definite Hamiltonian matrix [[A, B], [B*, A*]] -> stable, all lam real
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    A = X @ X.conj().T / n + 2 * np.eye(n)
    B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    B = 0.3 * (B + B.T) / 2
    return MultiModeForm(A, B, B.conj())


def decoupled(*forms):
    n = len(forms)
    A, Bp, Bm = (np.zeros((n, n), complex) for _ in range(3))
    for i, f in enumerate(forms):
        A[i, i], Bp[i, i], Bm[i, i] = f.as_tuple()
    return MultiModeForm(A, Bp, Bm)


class TestCommutator:
    def test_one_mode_consistency(self):
        f = OneModeForm(1.2, 0.3 - 0.1j, 0.5j)
        assert np.array_equal(commutator_matrix_nd(embed_one_mode(f)).data, commutator_matrix(f))

    def test_uncoupled_spectrum(self):
        K = commutator_matrix_nd(MultiModeForm(np.diag([1.0, 2.0]), np.zeros((2, 2)), np.zeros((2, 2)))).data
        assert np.allclose(np.sort(np.linalg.eigvals(K).real), [-2, -1, 1, 2])

    def test_determinant_identity(self, rng):
        K = commutator_matrix_nd(random_nd(4, rng)).data
        for _ in range(20):
            lam = complex(*rng.normal(size=2)) * 2
            lhs = np.linalg.det(K - lam * np.eye(8))
            rhs = np.linalg.det(K + lam * np.eye(8))
            assert abs(lhs - rhs) <= 1e-8 * abs(lhs)

    def test_hamiltonian_structure(self, rng):
        K = commutator_matrix_nd(random_nd(3, rng)).data
        J = _rm(3).T  # M R
        assert np.max(np.abs(K.T @ J + J @ K)) < 1e-14

    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_negation_symmetry(self, n, seed):
        m = commutator_matrix_nd(random_nd(n, np.random.default_rng(seed)))
        assert m.symmetry_residual() < 1e-10

    def test_round_trip(self, rng):
        f = random_nd(3, rng)
        g = form_from_commutator(commutator_matrix_nd(f).data)
        assert np.array_equal(g.a_matrix, f.a_matrix)
        assert np.array_equal(g.b_minus_matrix, f.b_minus_matrix)


class TestPairs:
    def test_uncoupled_canonical(self):
        m = commutator_matrix_nd(MultiModeForm(np.diag([1.0, 2.0]), np.zeros((2, 2)), np.zeros((2, 2))))
        pairs = eigen_pairs(m)
        assert [p[0] for p in pairs] == [1, 2]
        for i, (_, z, zb) in enumerate(pairs):
            e = np.zeros(4)
            e[i] = 1
            assert np.allclose(z, e) and np.allclose(zb, -np.roll(e, 2))

    def test_one_mode_embedding_exact(self):
        for f in (OneModeForm(1, 0.5, 0.3), OneModeForm(1, 0.1, 5), OneModeForm(1, 0.3 + 0.2j, 3 - 1j)):
            d = decompose(embed_one_mode(f))
            b = bogoliubov(f)
            assert abs(d.lambdas[0] - b.lam) < 1e-14
            got = (d.w.U[0, 0], d.w.V[0, 0], d.w.U_bar[0, 0], d.w.V_bar[0, 0])
            assert np.allclose(got, (b.u, b.v, b.u_bar, b.v_bar), atol=1e-13, rtol=0)

    def test_stable_hermitian(self, rng):
        for _ in range(10):
            pairs = eigen_pairs(commutator_matrix_nd(random_stable_hermitian(3, rng)))
            lams = np.array([p[0] for p in pairs])
            assert np.all(np.abs(lams.imag) < 1e-10) and np.all(lams.real > 0)

    def test_orthogonality(self, rng):
        for n in (2, 3, 5):
            pairs = eigen_pairs(commutator_matrix_nd(random_nd(n, rng)))
            Z = np.array([p[1] for p in pairs] + [p[2] for p in pairs]).T
            RM = _rm(n)
            G = Z.T @ RM @ Z
            # Z_i RM Z_j = 0 unless j is the partner of i
            expected = np.zeros((2 * n, 2 * n), complex)
            expected[:n, n:] = np.eye(n)
            expected[n:, :n] = -np.eye(n)
            assert np.max(np.abs(G - expected)) < 1e-10

    def test_degenerate_cluster(self):
        # three identical decoupled modes: a size-3 cluster, block normalized
        f = decoupled(*[OneModeForm(1, 0.5, 0.3)] * 3)
        d = decompose(f)
        assert d.diagonalizable
        assert np.allclose(d.lambdas, np.sqrt(0.85))
        assert max(d.w.residuals.values()) < 1e-12

    def test_non_diagonalizable_raises(self):
        with pytest.raises(NonDiagonalizableError) as exc:
            eigen_pairs(commutator_matrix_nd(embed_one_mode(OneModeForm(1, 0.5, 2))))
        assert exc.value.jordan_info.max_block_size() == 2


class TestW:
    def test_identity(self):
        d = decompose(MultiModeForm(np.eye(2), np.zeros((2, 2)), np.zeros((2, 2))))
        assert np.allclose(d.w.matrix(), np.eye(4), atol=1e-15)

    def test_random_n3(self, rng):
        worst_diag = worst_c = 0.0
        for _ in range(100):
            f = random_nd(3, rng)
            m = commutator_matrix_nd(f)
            w = build_w(eigen_pairs(m))
            W = w.matrix()
            D = W @ m.data @ np.linalg.inv(W)
            lam = np.diag(D)[:3]
            target = np.diag(np.r_[lam, -lam])
            worst_diag = max(worst_diag, np.max(np.abs(D - target)) / np.linalg.norm(m.data, 2))
            worst_c = max(worst_c, max(w_residuals(w).values()))
        assert worst_diag <= 1e-9
        assert worst_c <= 1e-10

    def test_json(self, rng):
        d = decompose(random_nd(2, rng))
        blob = json.loads(json.dumps(d.to_json()))
        assert blob["diagonalizable"] is True
        assert len(blob["lambdas"]) == 2


class TestDecompose:
    def test_two_uncoupled(self):
        f1, f2 = OneModeForm(1, 0.5, 0.3), OneModeForm(1, 0.1, 5)
        d = decompose(decoupled(f1, f2))
        assert np.allclose(sorted(d.lambdas, key=abs), sorted([lambda_of(f1), lambda_of(f2)], key=abs), atol=1e-14)
        labels = dict(zip(np.round(d.lambdas, 10), d.mode_regions))
        assert labels[np.round(lambda_of(f1), 10)] == classify(f1).label.value
        assert labels[np.round(lambda_of(f2), 10)] == classify(f2).label.value

    def test_lambda_zero_embedding(self):
        d = decompose(embed_one_mode(OneModeForm(1, 0.5, 2)))
        assert not d.diagonalizable and d.w is None
        assert d.jordan_info.max_block_size() == 2 and len(d.jordan_info.blocks()) == 1
        assert abs(d.jordan_info.eigenvalues[0]) < 1e-6

    def test_offdiag(self, rng):
        for n in (1, 4, 8):
            assert decompose(random_nd(n, rng)).offdiag_residual < 1e-8

    def test_agrees_with_one_mode_200_forms(self):
        for f in random_forms(200, seed=31):
            d = decompose(embed_one_mode(f))
            b = bogoliubov(f)
            assert d.diagonalizable
            assert abs(d.lambdas[0] - b.lam) < 1e-12 * max(1, abs(b.lam))
            r1, r2 = abs(b.v / b.u), abs(b.v_bar / b.u_bar)
            if min(abs(r1 - 1), abs(r2 - 1)) > 1e-6:
                assert d.vacuum.b_vacuum_exists == (r1 < 1)
                assert d.vacuum.bbar_vacuum_exists == (r2 < 1)


class TestVacuum:
    def test_trivial(self):
        d = decompose(MultiModeForm(np.diag([1.0, 3.0]), np.zeros((2, 2)), np.zeros((2, 2))))
        assert np.all(d.vacuum.sigma == 0) and np.all(d.vacuum.sigma_bar == 0)
        assert d.vacuum.b_vacuum_exists and d.vacuum.bbar_vacuum_exists

    def test_region_two_embedding(self):
        f = OneModeForm(1, 0.1, 5)
        b = bogoliubov(f)
        v = decompose(embed_one_mode(f)).vacuum
        assert abs(v.sigma[0] - abs(b.v / b.u)) < 1e-14 and v.sigma[0] < 1
        assert abs(v.sigma_bar[0] - abs(b.v_bar / b.u_bar)) < 1e-12 and v.sigma_bar[0] > 1
        assert v.b_vacuum_exists and not v.bbar_vacuum_exists

    def test_stable_hermitian_both(self, rng):
        for _ in range(10):
            v = decompose(random_stable_hermitian(3, rng)).vacuum
            assert v.b_vacuum_exists and v.bbar_vacuum_exists
            assert v.symmetry_residual < 1e-10

    def test_kernel_symmetric(self, rng):
        for n in (2, 5):
            v = decompose(random_nd(n, rng)).vacuum
            assert v.symmetry_residual < 1e-10
            assert np.max(np.abs(v.kernel - v.kernel.T)) < 1e-10

    def test_singular_u(self):
        # Ubar = 0 is impossible for a valid W; simulate with a hand-made W
        from bosonspec.multimode import SymplecticW

        w = SymplecticW(np.zeros((1, 1)), np.eye(1), np.eye(1), np.zeros((1, 1)))
        v = vacuum_existence(w)
        assert not v.b_vacuum_exists and "singular" in v.note


class TestJordan:
    def test_lambda_zero_curve(self):
        info = detect_jordan(commutator_matrix_nd(embed_one_mode(OneModeForm(1, 0.5, 2))))
        assert info.algebraic == [2] and info.geometric == [1]

    def test_diagonal(self):
        info = detect_jordan(commutator_matrix_nd(MultiModeForm(np.diag([1.0, 2.0]), np.zeros((2, 2)), np.zeros((2, 2)))))
        assert info.diagonalizable

    def test_zero_but_diagonalizable(self):
        f = MultiModeForm(np.diag([0.0, 1.0]), np.zeros((2, 2)), np.zeros((2, 2)))
        info = detect_jordan(commutator_matrix_nd(f))
        assert info.diagonalizable
        d = decompose(f)
        assert d.diagonalizable and sorted(abs(z) for z in d.lambdas) == [0, 1]

    def test_constructed_block_at_nonzero_lambda(self, rng):
        J = commutator_matrix_nd(
            MultiModeForm([[1 + 0.5j, 1], [0, 1 + 0.5j]], np.zeros((2, 2)), np.zeros((2, 2)))
        ).data
        for _ in range(5):
            S = random_symplectic(2, rng)
            K = S @ J @ np.linalg.inv(S)
            info = detect_jordan(commutator_matrix_nd(form_from_commutator(K)))
            assert info.max_block_size() == 2
            assert not decompose(form_from_commutator(K)).diagonalizable

    def test_symplectic_generator(self, rng):
        S = random_symplectic(3, rng)
        J = _rm(3)
        assert np.max(np.abs(S.T @ J @ S - J)) < 1e-12


class TestBiorthogonalFock:
    def test_two_mode_relation(self, rng):
        f = MultiModeForm(
            [[1.0, 0.2 + 0.1j], [0.1, 1.3]],
            [[0.2, 0.05j], [0.05j, 0.1]],
            [[0.15, 0.1], [0.1, -0.1j]],
        )
        d = decompose(f)
        assert d.vacuum.b_vacuum_exists and d.vacuum.bbar_vacuum_exists
        G, occs = fock.biorthogonal_gram_nd(d.w, 30, max_total=3)
        assert len(occs) == 10
        assert np.max(np.abs(G - np.eye(len(occs)))) < 1e-8
