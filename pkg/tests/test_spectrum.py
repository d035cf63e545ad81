"""Spectrum layer: root search, normalization, wavefunction assembly,
parameter scans. Ground truth for eigenvalues comes from the shooting
oracle in the acceptance suite; here the checks are structural (residuals,
invariants, determinism, synthetic residual functions)."""

import math

import numpy as np
import pytest

from deltashell import (
    Channel,
    ConvergenceError,
    SearchConfig,
    ShellParams,
    apply_transfer,
    find_bound_states,
    matching_residual,
    mobius_residual,
    normalize_state,
    refine_root,
    sample_wavefunction,
    shell_pair,
    spectrum_scan,
    transfer_matrix,
    wrap_half_pi,
)
from deltashell import spectrum as spectrum_mod

P = ShellParams(mass=1.0, radius=1.0, coupling=0.5)
CH = Channel(1)


def simpson(ys, xs):
    """Composite Simpson on a uniform grid with an odd point count."""
    h = (xs[-1] - xs[0]) / (len(xs) - 1)
    return h / 3.0 * (ys[0] + ys[-1] + 4.0 * sum(ys[1:-1:2]) + 2.0 * sum(ys[2:-2:2]))


class TestFindBoundStates:
    def test_single_state_and_residual(self):
        states = find_bound_states(CH, P)
        assert len(states) == 1
        s = states[0]
        assert abs(s.residual_at_root) <= 1e-10
        assert abs(matching_residual(CH, s.energy, P)) <= 1e-10
        assert abs(s.energy) < P.mass
        assert s.kappa == pytest.approx(
            math.sqrt(P.mass**2 - s.energy**2), rel=1e-14
        )
        assert s.binding == pytest.approx(P.mass - abs(s.energy), rel=1e-14)
        assert s.norm_constant > 0.0

    def test_deterministic(self):
        a = find_bound_states(CH, P)
        b = find_bound_states(CH, P)
        assert [s.energy for s in a] == [s.energy for s in b]
        assert [s.norm_constant for s in a] == [s.norm_constant for s in b]

    def test_free_case_empty(self):
        p0 = ShellParams(1.0, 1.0, 0.0)
        assert find_bound_states(CH, p0) == []
        assert find_bound_states(Channel(3), p0) == []

    def test_scaling_relation(self):
        e1 = [s.energy for s in find_bound_states(CH, ShellParams(1.0, 1.0, 0.7))]
        e2 = [s.energy for s in find_bound_states(CH, ShellParams(2.0, 0.5, 0.7))]
        assert len(e1) == len(e2) == 1
        assert e2[0] == pytest.approx(2.0 * e1[0], abs=1e-9)

    def test_mobius_form_confirms_root(self):
        s = find_bound_states(CH, P)[0]
        assert abs(mobius_residual(CH, s.energy, P)) <= 1e-9

    def test_ascending_order_multiple_channels(self):
        p = ShellParams(1.0, 2.0, 1.1)
        for ch in (Channel(1), Channel(3), Channel(5)):
            states = find_bound_states(ch, p)
            energies = [s.energy for s in states]
            assert energies == sorted(energies)


class TestNegativeChannelRoute:
    def test_reflected_spectrum_is_negated_flipped_coupling(self):
        pos = find_bound_states(CH, P)
        neg = find_bound_states(Channel(-1), ShellParams(1.0, 1.0, -0.5))
        assert len(pos) == len(neg) == 1
        assert neg[0].energy == -pos[0].energy  # exact by construction
        assert neg[0].channel == Channel(-1)
        assert "reflected_from" in neg[0].diagnostics

    def test_same_coupling_negative_channel_is_empty_here(self):
        # at this coupling the reflected problem (+j at -a) binds nothing
        assert find_bound_states(Channel(-1), P) == []

    def test_reflected_state_shell_conditions(self):
        p = ShellParams(1.0, 1.0, -0.5)
        state = find_bound_states(Channel(-1), p)[0]
        minus, plus = shell_pair(state, p)
        assert plus.norm2 == pytest.approx(minus.norm2, rel=1e-10)
        jump = wrap_half_pi(
            math.atan2(plus.f, plus.g) - math.atan2(minus.f, minus.g) + p.coupling
        )
        assert abs(jump) <= 1e-9


class TestRefineRoot:
    def test_synthetic_linear_residual(self):
        root = refine_root(
            CH, P, (0.0, 1.0), SearchConfig(residual_tol=1e-9),
            residual_fn=lambda e: e - 0.3,
        )
        assert root == pytest.approx(0.3, abs=1e-12)

    def test_bracket_already_at_tolerance_returns_midpoint(self):
        cfg = SearchConfig(bracket_tol=1e-2, residual_tol=1e-1)
        root = refine_root(CH, P, (0.299, 0.301), cfg, residual_fn=lambda e: e - 0.3)
        assert root == pytest.approx(0.3, abs=5e-3)

    def test_no_sign_change_rejected(self):
        with pytest.raises(ValueError):
            refine_root(CH, P, (0.5, 0.6), residual_fn=lambda e: 1.0)

    def test_never_leaves_bracket(self):
        seen = []

        def spy(e):
            seen.append(e)
            return math.tan(e - 0.37)  # steep, tests secant safeguards

        refine_root(CH, P, (0.0, 1.2), SearchConfig(residual_tol=1e-8), residual_fn=spy)
        assert all(0.0 <= e <= 1.2 for e in seen)

    def test_wrap_jump_bracket_raises(self):
        # a fake residual with a pi-jump sign change but no zero
        fn = lambda e: wrap_half_pi(1.5 + 2.0 * e)
        with pytest.raises(ConvergenceError):
            refine_root(CH, P, (-0.2, 0.2), residual_fn=fn)

    def test_real_root_value(self):
        root = refine_root(CH, P, (0.5, 0.99))
        assert abs(matching_residual(CH, root, P)) <= 1e-10


class TestNormalization:
    def test_density_integrates_to_one(self):
        state = find_bound_states(CH, P)[0]
        r_cut = P.radius + 40.0 / state.kappa
        n_pts = 16001
        inner = np.linspace(1e-9, P.radius, n_pts)
        outer = np.linspace(P.radius, r_cut, n_pts)
        d_in = [s.norm2 for s in sample_wavefunction(state, P, inner)]
        d_out = [s.norm2 for s in sample_wavefunction(state, P, outer)]
        total = simpson(d_in, inner) + simpson(d_out, outer)
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_tail_beyond_cut_negligible(self):
        state = find_bound_states(CH, P)[0]
        r_cut = P.radius + 40.0 / state.kappa
        ext = np.linspace(r_cut, 2.0 * r_cut, 2001)
        d_ext = [s.norm2 for s in sample_wavefunction(state, P, ext)]
        assert simpson(d_ext, ext) < 1e-12

    def test_renormalize_is_stable(self):
        state = find_bound_states(CH, P)[0]
        again = normalize_state(state, P)
        assert again.norm_constant == pytest.approx(state.norm_constant, rel=1e-12)

    def test_norm_positive_finite_every_state(self):
        for p in (P, ShellParams(1.0, 2.0, 1.1), ShellParams(1.0, 0.5, 0.3)):
            for state in find_bound_states(CH, p):
                assert state.norm_constant > 0.0
                assert math.isfinite(state.norm_constant)


class TestWavefunction:
    def test_shell_rows_norm_continuity(self):
        state = find_bound_states(CH, P)[0]
        minus, plus = shell_pair(state, P)
        assert plus.norm2 == pytest.approx(minus.norm2, rel=1e-10)

    def test_shell_rows_transfer_relation(self):
        state = find_bound_states(CH, P)[0]
        minus, plus = shell_pair(state, P)
        rotated = apply_transfer(transfer_matrix(P.coupling), minus)
        assert plus.f == pytest.approx(rotated.f, abs=1e-10)
        assert plus.g == pytest.approx(rotated.g, abs=1e-10)

    def test_origin_limit(self):
        state = find_bound_states(CH, P)[0]
        rs = [1e-2, 1e-4, 1e-6]
        norms = [s.norm2 for s in sample_wavefunction(state, P, rs)]
        assert norms[0] > norms[1] > norms[2]
        assert norms[2] < 1e-6

    def test_far_tail_decays(self):
        state = find_bound_states(CH, P)[0]
        k = state.kappa
        rs = [P.radius + 10.0 / k, P.radius + 20.0 / k]
        n1, n2 = (s.norm2 for s in sample_wavefunction(state, P, rs))
        assert n2 < n1 * math.exp(-0.9 * 2 * 10.0)

    def test_grid_routing_across_shell(self):
        state = find_bound_states(CH, P)[0]
        samples = sample_wavefunction(state, P, [0.5, 0.999, 1.0, 1.001, 2.0])
        assert [s.r for s in samples] == [0.5, 0.999, 1.0, 1.001, 2.0]
        # r = r0 uses the outer branch (the plus side)
        _, plus = shell_pair(state, P)
        assert samples[2].f == pytest.approx(plus.f, rel=1e-12)

    def test_rejects_nonpositive_radius(self):
        state = find_bound_states(CH, P)[0]
        with pytest.raises(ValueError):
            sample_wavefunction(state, P, [0.0])


class TestScanAndDensify:
    def test_singleton_scan_equals_find(self):
        rows = spectrum_scan([CH], [P])
        assert len(rows) == 1
        direct = find_bound_states(CH, P)
        assert rows[0].energies == tuple(s.energy for s in direct)
        assert rows[0].error is None

    def test_row_order_params_major(self):
        p2 = ShellParams(1.0, 2.0, 0.5)
        rows = spectrum_scan([CH, Channel(3)], [P, p2])
        key = [(r.params.radius, r.channel.two_j) for r in rows]
        assert key == [(1.0, 1), (1.0, 3), (2.0, 1), (2.0, 3)]

    def test_failures_recorded_per_row(self, monkeypatch):
        calls = {"n": 0}
        real = spectrum_mod.find_bound_states

        def flaky(ch, p, cfg=None):
            calls["n"] += 1
            if calls["n"] == 1:
                raise ConvergenceError("synthetic failure")
            return real(ch, p, cfg)

        monkeypatch.setattr(spectrum_mod, "find_bound_states", flaky)
        rows = spectrum_mod.spectrum_scan([CH], [P, P])
        assert rows[0].error is not None and rows[0].energies == ()
        assert rows[1].error is None and len(rows[1].energies) == 1

    def test_empty_inputs_rejected(self):
        with pytest.raises(ValueError):
            spectrum_scan([], [P])
        with pytest.raises(ValueError):
            spectrum_scan([CH], [])

    def test_densify_separates_close_roots(self):
        # synthetic residual with two roots 1.1 coarse cells apart: the
        # first pass flags crowding, the 4x pass separates them cleanly
        cfg = SearchConfig(scan_points=64, residual_tol=1e-6)
        cell = 2.0 / 63
        r1, r2 = 0.1, 0.1 + 1.1 * cell
        fn = lambda e: (e - r1) * (e - r2)
        found, warn = spectrum_mod._scan_with_densify(fn, -1.0, 1.0, cfg, 1.0)
        assert warn is None
        assert [pytest.approx(r, abs=1e-10) for r in (r1, r2)] == [
            f[0] for f in found
        ]

    def test_densify_reports_persistently_close_roots(self):
        # three roots: the close pair straddles a coarse grid node so the
        # scan sees both, and 1.5 dense cells still separate them after the
        # 4x pass, which is closer than the two-cell reporting threshold
        cfg = SearchConfig(scan_points=64, residual_tol=1e-6)
        coarse = 2.0 / 63
        dense = 2.0 / 255
        node = -1.0 + 35 * coarse
        r1 = node - 20 * coarse
        r2 = node - 0.3 * dense
        r3 = node + 1.2 * dense
        fn = lambda e: (e - r1) * (e - r2) * (e - r3)
        found, warn = spectrum_mod._scan_with_densify(fn, -1.0, 1.0, cfg, 1.0)
        assert len(found) == 3
        assert warn is not None
