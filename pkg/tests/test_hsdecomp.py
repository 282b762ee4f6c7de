from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghzhs.errors import AddressingError, NormalizationError, ValidationError
from ghzhs.hsdecomp import (
    CoefficientTensor,
    PauliString,
    RotationMatrix,
    all_pauli_strings,
    decompose,
    pauli_string_matrix,
    reconstruct,
    rotate_frame,
    su2_to_so3,
    transform_under_local_unitary,
)
from ghzhs.interferometer import beam_splitter_unitary
from ghzhs.qstate import (
    DensityMatrix,
    LocalUnitary,
    PureState,
    apply_local_unitary,
    ghz_density,
    haar_unitary,
    make_rng,
    maximally_mixed,
    pure_to_density,
    random_density,
)

from oracles import adjoint_matrix, pauli_matrix, reconstruct_sum, trace_coefficients

seeds = st.integers(min_value=0, max_value=2**63 - 1)

GHZ_NONZERO = {"III": 1, "XXX": 1, "XYY": -1, "YXY": -1, "YYX": -1, "IZZ": 1, "ZIZ": 1, "ZZI": 1}


def rz(theta):
    return np.diag([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)])


class TestPauliString:
    def test_labels_and_weight(self):
        s = PauliString("XIZ")
        assert tuple(s) == (1, 0, 3)
        assert s.weight == 2 and s.support == (0, 2)
        assert s.label() == "XIZ"

    @pytest.mark.parametrize("bad", ["XQ", (0, 4), (), "IIIIIII"])
    def test_invalid(self, bad):
        with pytest.raises(ValidationError):
            PauliString(bad)

    def test_lexicographic_order(self):
        labels = [s.label() for s in all_pauli_strings(2)]
        assert labels == sorted(labels, key=lambda t: ["IXYZ".index(c) for c in t])
        assert labels[:5] == ["II", "IX", "IY", "IZ", "XI"]


class TestPauliStringMatrix:
    def test_zzz(self):
        assert np.array_equal(pauli_string_matrix((3, 3, 3)), np.diag([1, -1, -1, 1, -1, 1, 1, -1]).astype(complex))

    def test_identity(self):
        assert np.array_equal(pauli_string_matrix("III"), np.eye(8))

    def test_matches_loop_kron(self):
        for s in all_pauli_strings(3):
            assert np.array_equal(pauli_string_matrix(s), pauli_matrix(tuple(s)))

    def test_orthogonality_exhaustive(self):
        mats = np.array([pauli_string_matrix(s) for s in all_pauli_strings(3)])
        gram = np.einsum("sij,tji->st", mats, mats)
        assert np.abs(gram - 8 * np.eye(64)).max() == 0

    def test_hermitian_involutive_traceless(self):
        for s in all_pauli_strings(3):
            m = pauli_string_matrix(s)
            assert np.array_equal(m, m.conj().T)
            assert np.array_equal(m @ m, np.eye(8))
            if s.weight:
                assert np.trace(m) == 0


class TestDecompose:
    def test_ghz_values(self, ghz):
        c = decompose(ghz)
        for s, v in c.items():
            assert abs(v - GHZ_NONZERO.get(s.label(), 0)) < 1e-12, s

    def test_ghz_named_views(self, ghz):
        c = decompose(ghz)
        assert c.R[0, 0, 0] == pytest.approx(1, abs=1e-12)
        for idx in [(0, 1, 1), (1, 0, 1), (1, 1, 0)]:
            assert c.R[idx] == pytest.approx(-1, abs=1e-12)
        for block in (c.t_bc, c.o_ac, c.q_ab):
            expected = np.zeros((3, 3))
            expected[2, 2] = 1
            assert np.abs(block - expected).max() < 1e-12
        for v in (c.r, c.s, c.p):
            assert np.abs(v).max() < 1e-12

    def test_maximally_mixed(self):
        c = decompose(maximally_mixed(3))
        assert c.unit == 1
        assert np.count_nonzero(np.abs(c.values) > 1e-15) == 1

    def test_product_000(self):
        c = decompose(pure_to_density(PureState.basis((0, 0, 0))))
        for s, v in c.items():
            expected = 0.0 if any(x in (1, 2) for x in s) else 1.0
            assert abs(v - expected) < 1e-12, s

    def test_product_001_fixes_party_order(self):
        # c is the least significant bit: only party c has <Z> = -1
        c = decompose(pure_to_density(PureState.basis((0, 0, 1))))
        assert c.r[2] == 1 and c.s[2] == 1 and c.p[2] == -1
        assert c.q_ab[2, 2] == 1 and c.o_ac[2, 2] == -1 and c.t_bc[2, 2] == -1
        assert c.R[2, 2, 2] == -1

    def test_matches_trace_oracle(self, random_states):
        for rho in random_states[:20]:
            ref = trace_coefficients(rho.entries, 3)
            c = decompose(rho)
            for s, v in ref.items():
                assert abs(v.imag) < 1e-12
                assert abs(c.values[s] - v.real) < 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            decompose(np.array([[0.5, 0.3], [0.0, 0.5]]))

    def test_coefficients_bounded(self, random_states):
        for rho in random_states:
            assert np.abs(decompose(rho).values).max() <= 1 + 1e-12

    def test_two_and_four_parties(self):
        for n in (1, 2, 4):
            rho = random_density(n, n, 2)
            ref = trace_coefficients(rho.entries, n)
            c = decompose(rho)
            assert max(abs(c.values[s] - v.real) for s, v in ref.items()) < 1e-12


class TestReconstruct:
    def test_ghz_from_coefficients(self, ghz):
        rho = reconstruct(CoefficientTensor.from_mapping(3, GHZ_NONZERO), check_psd=True)
        assert np.abs(rho.entries - ghz.entries).max() < 1e-12

    def test_identity_only(self):
        rho = reconstruct(CoefficientTensor.from_mapping(3, {"III": 1}))
        assert np.abs(rho.entries - np.eye(8) / 8).max() < 1e-15

    def test_normalization_error(self):
        with pytest.raises(NormalizationError):
            reconstruct(CoefficientTensor.from_mapping(3, {"III": 0.5}))

    def test_matches_sum_oracle(self):
        rng = make_rng(4)
        v = rng.uniform(-0.1, 0.1, (4, 4, 4))
        v[0, 0, 0] = 1
        c = CoefficientTensor(v)
        ref = reconstruct_sum({s: v[s] for s in product(range(4), repeat=3)}, 3)
        assert np.abs(reconstruct(c).entries - ref).max() < 1e-15

    def test_round_trip_from_coefficients(self):
        # random coefficients scaled well inside the purity bound
        for seed in range(100):
            rng = make_rng(seed)
            v = rng.standard_normal((4, 4, 4))
            v[0, 0, 0] = 0
            v *= rng.uniform(0, 1) * np.sqrt(7) / np.linalg.norm(v)
            v[0, 0, 0] = 1
            back = decompose(reconstruct(CoefficientTensor(v)))
            assert np.abs(back.values - v).max() < 1e-12

    def test_round_trip_from_states(self, random_states):
        for rho in random_states:
            assert np.abs(reconstruct(decompose(rho)).entries - rho.entries).max() < 1e-12

    def test_non_psd_allowed_unless_checked(self):
        c = CoefficientTensor.from_mapping(1, {"I": 1, "Z": 2})
        reconstruct(c)
        with pytest.raises(ValidationError):
            reconstruct(c, check_psd=True)


class TestPurity:
    def test_random(self, random_states):
        for rho in random_states:
            assert abs(decompose(rho).purity_sum() - 8 * rho.purity()) < 1e-10

    def test_ghz_exact(self, ghz):
        assert abs(decompose(ghz).purity_sum() - 8) < 1e-12

    def test_bound(self, random_states):
        assert all(decompose(r).purity_sum() <= 8 + 1e-10 for r in random_states)


class TestSu2ToSo3:
    def test_identity(self):
        assert np.array_equal(su2_to_so3(np.eye(2)).matrix, np.eye(3))

    def test_z_rotation_quarter_turn(self):
        # frozen from the explicit 2x2 trace oracle at theta = pi/2
        expected = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
        assert np.abs(adjoint_matrix(rz(np.pi / 2)) - expected).max() < 1e-15
        assert np.abs(su2_to_so3(rz(np.pi / 2)).matrix - expected).max() < 1e-15

    @pytest.mark.parametrize("theta", np.linspace(-3, 3, 7))
    def test_z_rotation_general(self, theta):
        m = su2_to_so3(rz(theta)).matrix
        c, s = np.cos(theta), np.sin(theta)
        assert np.abs(m - [[c, -s, 0], [s, c, 0], [0, 0, 1]]).max() < 1e-15

    def test_matches_oracle_orthogonal_det_one(self):
        for seed in range(50):
            u = haar_unitary(seed)
            m = su2_to_so3(u)
            assert np.abs(m.matrix - adjoint_matrix(u)).max() < 1e-14
            assert np.abs(m.matrix @ m.matrix.T - np.eye(3)).max() < 1e-12
            assert abs(m.det() - 1) < 1e-12

    def test_global_phase_drops_out(self):
        rng = make_rng(77)
        u = haar_unitary(rng)
        base = su2_to_so3(u).matrix
        for alpha in rng.uniform(0, 2 * np.pi, 10):
            assert np.abs(su2_to_so3(np.exp(1j * alpha) * u).matrix - base).max() < 1e-14

    def test_homomorphism(self):
        for seed in range(50):
            u, v = haar_unitary(2 * seed), haar_unitary(2 * seed + 1)
            lhs = su2_to_so3(u @ v).matrix
            rhs = su2_to_so3(u).matrix @ su2_to_so3(v).matrix
            assert np.abs(lhs - rhs).max() < 1e-12

    def test_dagger_is_transpose(self):
        u = haar_unitary(3)
        assert np.abs(su2_to_so3(u.conj().T).matrix - su2_to_so3(u).matrix.T).max() < 1e-14

    def test_rejects_non_unitary(self):
        with pytest.raises(ValidationError):
            su2_to_so3(np.array([[1, 1], [0, 1]]))


class TestRotateFrame:
    def test_identity_rotations(self, random_states):
        c = decompose(random_states[0])
        out = rotate_frame(c, [np.eye(3)] * 3)
        assert np.array_equal(out.values, c.values)

    def test_block_laws(self):
        c = decompose(random_density(11, 3, 8))
        oa, ob, oc = (su2_to_so3(haar_unitary(s)).matrix for s in (1, 2, 3))
        out = rotate_frame(c, [oa, ob, oc])
        assert np.abs(out.r - oa @ c.r).max() < 1e-14
        assert np.abs(out.s - ob @ c.s).max() < 1e-14
        assert np.abs(out.p - oc @ c.p).max() < 1e-14
        assert np.abs(out.q_ab - oa @ c.q_ab @ ob.T).max() < 1e-14
        assert np.abs(out.o_ac - oa @ c.o_ac @ oc.T).max() < 1e-14
        assert np.abs(out.t_bc - ob @ c.t_bc @ oc.T).max() < 1e-14
        ref = np.einsum("ai,bj,ck,ijk->abc", oa, ob, oc, c.R)
        assert np.abs(out.R - ref).max() < 1e-14
        assert abs(out.purity_sum() - c.purity_sum()) < 1e-10

    def test_party_a_only_leaves_rest_bitwise(self):
        c = decompose(random_density(12, 3, 8))
        out = rotate_frame(c, [su2_to_so3(haar_unitary(5)), np.eye(3), np.eye(3)])
        assert np.array_equal(out.t_bc, c.t_bc)
        assert np.array_equal(out.s, c.s) and np.array_equal(out.p, c.p)
        assert out.unit == c.unit

    def test_consistency_with_state_path(self):
        for seed in range(50):
            rho = random_density(seed, 3, 1 + seed % 8)
            u = haar_unitary(seed + 500)
            lhs = rotate_frame(decompose(rho), [su2_to_so3(u), np.eye(3), np.eye(3)])
            rhs = decompose(apply_local_unitary(rho, LocalUnitary("a", u)))
            assert np.abs(lhs.values - rhs.values).max() < 1e-12

    def test_validation(self):
        c = decompose(ghz_density())
        with pytest.raises(ValidationError):
            rotate_frame(c, [np.eye(3)] * 2)
        with pytest.raises(ValidationError):
            rotate_frame(c, [np.eye(3) * 2, np.eye(3), np.eye(3)])
        with pytest.raises(ValidationError):
            RotationMatrix(np.ones((3, 3)))


class TestTransformUnderLocalUnitary:
    def test_identity(self, random_states):
        c = decompose(random_states[3])
        out = transform_under_local_unitary(c, LocalUnitary.identity("b"))
        assert np.array_equal(out.values, c.values)

    def test_beam_splitter_on_a(self, ghz):
        c = decompose(ghz)
        u = LocalUnitary("a", beam_splitter_unitary(0.0))
        out = transform_under_local_unitary(c, u)
        ref = decompose(apply_local_unitary(ghz, u))
        assert np.abs(out.values - ref.values).max() < 1e-12
        assert out.t_bc[2, 2] == 1 and np.count_nonzero(out.t_bc) == 1
        assert not out.s.any() and not out.p.any()

    @given(seeds, st.integers(0, 2), st.sampled_from([1, 2, 4, 8]))
    @settings(max_examples=60, deadline=None)
    def test_matches_matrix_path(self, seed, party, rank):
        rho = random_density(seed, 3, rank)
        u = LocalUnitary(party, haar_unitary(seed + 17))
        out = transform_under_local_unitary(decompose(rho), u)
        ref = decompose(apply_local_unitary(rho, u))
        assert np.abs(out.values - ref.values).max() < 1e-12

    def test_party_b_leaves_o_ac_and_r(self, ghz):
        c = decompose(ghz)
        for seed in range(100):
            u = LocalUnitary("b", haar_unitary(seed))
            out = transform_under_local_unitary(c, u)
            assert np.abs(out.o_ac - c.o_ac).max() <= 1e-15
            assert np.abs(out.r - c.r).max() <= 1e-15
            ref = decompose(apply_local_unitary(ghz, u))
            assert np.abs(ref.o_ac - c.o_ac).max() < 1e-12
            assert np.abs(ref.r - c.r).max() < 1e-12

    def test_identity_at_party_strings_unchanged(self):
        rho = random_density(21, 3, 8)
        c = decompose(rho)
        for party in range(3):
            out = transform_under_local_unitary(c, LocalUnitary(party, haar_unitary(party)))
            for s, v in c.items():
                if s[party] == 0:
                    assert abs(out[s] - v) < 1e-12

    def test_three_party_block_moves_for_haar(self, ghz):
        c = decompose(ghz)
        moved = [
            np.abs(transform_under_local_unitary(c, LocalUnitary("a", haar_unitary(s))).R - c.R).max() > 0.1
            for s in range(200)
        ]
        assert np.mean(moved) >= 0.99

    def test_bad_party(self):
        c = decompose(random_density(0, 2, 1))
        with pytest.raises(AddressingError):
            transform_under_local_unitary(c, LocalUnitary("c", np.eye(2)))


def test_named_views_need_three_parties():
    c = decompose(DensityMatrix(np.eye(4) / 4))
    with pytest.raises(AttributeError):
        c.R
    assert c.unit == 1
    assert set(c.blocks()) == {"unit", "a", "b", "ab"}
