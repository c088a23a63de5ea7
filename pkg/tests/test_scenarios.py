"""Scenario family construction, data tables and every closed-form oracle."""

import math

import numpy as np
import pytest

from ncx import (
    DataTable,
    MesdParams,
    NoiseMap,
    NotParameterizableError,
    apply_noise_to_effects,
    build_mesd,
    coherence,
    coherence_bound,
    data_table,
    dephase_fragment,
    dephasing_matrix,
    depolarizing_matrix,
    extract_sce,
    incoherent_model,
    model_violations,
    nc_inequality_holds,
    p_threshold,
    r_deph_min_analytic,
    r_depol_min_analytic,
    validate_fragment,
)

RT2 = math.sqrt(2.0)


def _sce_depol(theta: float, r: float):
    s = 0.5 + 0.5 * (1.0 - r) * math.cos(theta)
    c = (1.0 - r) * math.sin(theta) ** 2 + r / 2.0
    eps = r / 2.0
    return s, c, eps


def _sce_deph(theta: float, r: float):
    # actual dephased statistics; c - eps = (1-r) sin^2(theta) matches the
    # depolarized case, which is why both share the same inequality flip point
    s = 0.5 * (1.0 + math.cos(theta))
    c = math.sin(theta) ** 2 * (2.0 - r) / 2.0
    eps = r * math.sin(theta) ** 2 / 2.0
    return s, c, eps


class TestBuilder:
    def test_psi_vector_at_pi3(self, mesd_pi3):
        expected = np.array(
            [1.0, math.sin(math.pi / 3), math.cos(math.pi / 3)]
        ) / RT2
        assert np.max(np.abs(mesd_pi3.states["psi"] - expected)) <= 1e-15
        assert mesd_pi3.states["psi"] == pytest.approx(
            [0.70711, 0.61237, 0.35355], abs=5e-6
        )

    def test_rotated_discriminating_effect(self):
        fragment = build_mesd(MesdParams(theta=math.pi / 3, alpha=math.pi / 2))
        assert np.allclose(
            fragment.effects["Egpsi"], np.array([1.0, 1.0, 0.0]) / RT2, atol=1e-15
        )

    def test_theta_zero_warns_about_coincidences(self):
        with pytest.warns(UserWarning, match="coinciding"):
            fragment = build_mesd(MesdParams(theta=0.0))
        assert np.allclose(fragment.states["psibar"], fragment.states["phi"], atol=1e-15)

    def test_impurity_mixes_toward_unit(self):
        p = 0.3
        fragment = build_mesd(MesdParams(theta=1.0, p=p))
        expected = (1.0 - p) * np.array([1.0, 0.0, 1.0]) / RT2 + (p / 2.0) * np.array(
            [RT2, 0.0, 0.0]
        )
        assert np.allclose(fragment.effects["Egpsi"], expected, atol=1e-15)

    def test_operational_equivalence_of_preparations(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            params = MesdParams(
                theta=float(rng.uniform(0.0, math.pi / 2)),
                alpha=float(rng.uniform(0.0, math.pi / 2)),
                p=float(rng.uniform(0.0, 1.0)),
            )
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                fragment = build_mesd(params)
            left = 0.5 * fragment.states["psi"] + 0.5 * fragment.states["psibar"]
            right = 0.5 * fragment.states["phi"] + 0.5 * fragment.states["phibar"]
            assert np.max(np.abs(left - right)) <= 1e-14

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            MesdParams(theta=-0.1)
        with pytest.raises(ValueError):
            MesdParams(theta=2.0)
        with pytest.raises(ValueError):
            MesdParams(theta=0.5, p=1.5)
        with pytest.raises(ValueError):
            MesdParams(theta=float("nan"))


class TestNoiseMatrices:
    def test_dephasing_matrix_values(self):
        assert np.allclose(dephasing_matrix(math.pi / 2), np.diag([1.0, 0.0, 1.0]), atol=1e-15)
        assert np.allclose(dephasing_matrix(0.0), np.diag([1.0, 1.0, 0.0]), atol=1e-15)
        quarter = np.array([[1.0, 0, 0], [0, 0.5, 0.5], [0, 0.5, 0.5]])
        assert np.allclose(dephasing_matrix(math.pi / 4), quarter, atol=1e-15)

    def test_depolarizing_matrix_values(self, mesd_pi3):
        matrix = depolarizing_matrix(mesd_pi3)
        assert np.allclose(matrix, np.diag([1.0, 0.0, 0.0]), atol=1e-15)
        assert np.allclose(matrix @ matrix, matrix, atol=1e-15)
        depolarized_effect = matrix @ mesd_pi3.effects["psi"]
        for state in mesd_pi3.states.values():
            assert float(depolarized_effect @ state) == pytest.approx(0.5, abs=1e-12)


class TestClosedForms:
    def test_depolarizing_robustness_values(self):
        assert r_depol_min_analytic(math.pi / 3) == pytest.approx(0.2, abs=1e-12)
        assert r_depol_min_analytic(math.pi / 2) == pytest.approx(0.0, abs=1e-12)
        assert r_depol_min_analytic(math.pi / 4) == pytest.approx(
            1.0 - 1.0 / (0.5 + math.sqrt(2.0) / 2.0), abs=1e-12
        )
        assert r_depol_min_analytic(math.pi / 4) == pytest.approx(0.171573, abs=1e-6)

    def test_dephasing_robustness_values(self):
        assert r_deph_min_analytic(1e-9) == pytest.approx(0.5, abs=1e-12)
        assert r_deph_min_analytic(math.pi / 2) == pytest.approx(0.0, abs=1e-12)
        assert r_deph_min_analytic(math.pi / 3) == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_threshold_and_coherence_bound(self):
        assert p_threshold(math.pi / 3) == pytest.approx(0.5, abs=1e-12)
        assert coherence_bound(0.0) == 0.0
        assert coherence_bound(p_threshold(math.pi / 3)) == pytest.approx(
            math.sin(math.pi / 3), abs=1e-12
        )
        with pytest.raises(ValueError):
            coherence_bound(1.5)


class TestCoherence:
    def test_state_coherence_is_sine_of_tilt(self):
        fragment = build_mesd(MesdParams(theta=math.pi / 6))
        assert coherence(fragment.states["psi"]) == pytest.approx(0.5, abs=1e-12)

    def test_discriminating_effect_has_zero_coherence(self, mesd_pi3):
        assert coherence(mesd_pi3.effects["Egpsi"]) == 0.0

    def test_maximal_coherence_at_pi2(self):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            fragment = build_mesd(MesdParams(theta=math.pi / 2))
        assert coherence(fragment.states["psi"]) == pytest.approx(1.0, abs=1e-12)

    def test_coherence_shrinks_linearly_under_dephasing(self, mesd_pi3):
        noise = NoiseMap.dephasing(math.pi / 2)
        for r in (0.0, 0.3, 0.8, 1.0):
            noisy = apply_noise_to_effects(mesd_pi3, noise, r)
            assert coherence(noisy.effects["psi"]) == pytest.approx(
                (1.0 - r) * math.sin(math.pi / 3), abs=1e-12
            )


class TestDataTable:
    def test_noiseless_entry(self, mesd_pi3):
        table = data_table(mesd_pi3)
        assert table.probabilities[1, 0] == pytest.approx(
            math.sin(math.pi / 3) ** 2, abs=1e-12
        )

    def test_dephased_discriminating_row_is_r_independent(self, mesd_pi3):
        for r in (0.2, 0.7, 1.0):
            noisy = apply_noise_to_effects(mesd_pi3, NoiseMap.dephasing(math.pi / 2), r)
            table = data_table(noisy)
            assert table.probabilities[2, 0] == pytest.approx(0.75, abs=1e-12)

    def test_fully_depolarized_projector_rows_are_flat(self, mesd_pi3):
        noisy = apply_noise_to_effects(mesd_pi3, NoiseMap.depolarizing(mesd_pi3), 1.0)
        table = data_table(noisy)
        assert np.allclose(table.probabilities[:2], 0.5, atol=1e-12)

    def test_entries_outside_unit_interval_rejected(self):
        with pytest.raises(ValueError):
            DataTable(probabilities=np.full((3, 4), 1.2))

    def test_wrong_shape_rejected(self):
        with pytest.raises(ValueError):
            DataTable(probabilities=np.zeros((2, 4)))


class TestSceExtraction:
    def test_noiseless_depolarized_parameters(self, mesd_pi3):
        s, c, eps = extract_sce(data_table(mesd_pi3))
        expected = _sce_depol(math.pi / 3, 0.0)
        assert (s, c, eps) == pytest.approx(expected, abs=1e-12)
        assert (s, c, eps) == pytest.approx((0.75, 0.75, 0.0), abs=1e-12)

    def test_fully_dephased_parameters(self, mesd_pi3):
        # at r=1 the psi effect becomes (1,0,cos)/rt2, so c = sin^2/2 = 0.375
        # and eps = c; s keeps its r-independent value 0.75
        noisy = apply_noise_to_effects(mesd_pi3, NoiseMap.dephasing(math.pi / 2), 1.0)
        s, c, eps = extract_sce(data_table(noisy))
        assert (s, c, eps) == pytest.approx((0.75, 0.375, 0.375), abs=1e-12)
        assert c - eps == pytest.approx(0.0, abs=1e-12)

    def test_uniform_table(self):
        params = extract_sce(DataTable(probabilities=np.full((3, 4), 0.5)))
        assert (params.s, params.c, params.epsilon) == pytest.approx(
            (0.5, 0.5, 0.5), abs=1e-15
        )
        assert params.residual <= 1e-15

    def test_pattern_violation_rejected(self):
        probs = np.full((3, 4), 0.5)
        probs[0, 0] = 0.9  # breaks the column symmetry
        with pytest.raises(NotParameterizableError):
            extract_sce(DataTable(probabilities=probs))

    @pytest.mark.parametrize("noise_kind", ["depolarizing", "dephasing"])
    def test_closed_forms_on_30_point_grid(self, noise_kind):
        formula = _sce_depol if noise_kind == "depolarizing" else _sce_deph
        for theta in np.linspace(0.05, math.pi / 2 - 0.05, 30):
            fragment = build_mesd(MesdParams(theta=float(theta)))
            noise = (
                NoiseMap.depolarizing(fragment)
                if noise_kind == "depolarizing"
                else NoiseMap.dephasing(math.pi / 2)
            )
            for r in (0.0, 0.35, 1.0):
                noisy = apply_noise_to_effects(fragment, noise, r)
                got = tuple(extract_sce(data_table(noisy)))
                assert got == pytest.approx(formula(float(theta), r), abs=1e-12)


class TestInequality:
    def test_documented_examples(self):
        assert not nc_inequality_holds(0.75, 0.75, 0.0)
        assert nc_inequality_holds(0.5, 0.5, 0.5)
        assert nc_inequality_holds(0.625, 0.75, 0.0)  # exact boundary

    @pytest.mark.parametrize("noise_kind", ["depolarizing", "dephasing"])
    def test_flip_point_matches_analytic_robustness(self, noise_kind):
        for theta in (0.4, math.pi / 3, 1.3):
            fragment = build_mesd(MesdParams(theta=theta))
            noise = (
                NoiseMap.depolarizing(fragment)
                if noise_kind == "depolarizing"
                else NoiseMap.dephasing(math.pi / 2)
            )

            def contextual(r: float) -> bool:
                noisy = apply_noise_to_effects(fragment, noise, r)
                s, c, eps = extract_sce(data_table(noisy))
                return not nc_inequality_holds(s, c, eps)

            lo, hi = 0.0, 1.0
            assert contextual(lo) and not contextual(hi)
            while hi - lo > 1e-9:
                mid = 0.5 * (lo + hi)
                if contextual(mid):
                    lo = mid
                else:
                    hi = mid
            analytic = (
                r_depol_min_analytic(theta)
                if noise_kind == "depolarizing"
                else r_deph_min_analytic(theta)
            )
            assert hi == pytest.approx(analytic, abs=1e-6)


class TestIncoherentModel:
    def test_dephased_states_at_pi3(self, mesd_pi3):
        dephased = dephase_fragment(mesd_pi3)
        model = incoherent_model(dephased.states, dephased.effects)
        assert model.ontic_dim == 2
        assert model.epistemic_states["psi"] == pytest.approx((0.75, 0.25), abs=1e-12)

    def test_maximally_mixed_state_is_uniform(self, mesd_pi3):
        model = incoherent_model({"mm": mesd_pi3.maxmix}, {"unit": mesd_pi3.unit})
        assert model.epistemic_states["mm"] == pytest.approx((0.5, 0.5), abs=1e-15)
        assert model.response_functions["unit"] == pytest.approx((1.0, 1.0), abs=1e-15)

    def test_coherent_state_rejected(self, mesd_pi3):
        with pytest.raises(ValueError):
            incoherent_model(mesd_pi3.states, mesd_pi3.effects)

    def test_reproduces_dephased_fragment_exactly_and_passes_invariants(self, mesd_pi3):
        dephased = dephase_fragment(mesd_pi3)
        assert validate_fragment(dephased).ok
        model = incoherent_model(dephased.states, dephased.effects)
        for elabel, effect in dephased.effects.items():
            for slabel, state in dephased.states.items():
                predicted = float(
                    model.response_functions[elabel] @ model.epistemic_states[slabel]
                )
                assert abs(predicted - float(effect @ state)) <= 1e-12
        problems = model_violations(
            model, dephased, NoiseMap.dephasing(math.pi / 2), 0.0
        )
        assert problems == []
