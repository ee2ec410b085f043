# -*- coding: utf-8 -*-
"""
物理的な振る舞いの再現（プリセットのパラメータ、数秒〜数分）
"""

import math

import numpy as np
import pytest

from src import simulate as cli
from src.core.experiment import simulate, summarize
from src.core.measures import log_negativity
from src.core.propagator import is_dissipative, steady_state
from src.handlers.compare_handler import run_compare
from tests.conftest import PRESETS_DIR, parse_config

pytestmark = pytest.mark.slow

# x₋ = (x₁ − x₂)/√2, p₋ = (p₁ − p₂)/√2
RELATIVE_MODE = np.array([
    [1.0, 0.0, -1.0, 0.0],
    [0.0, 1.0, 0.0, -1.0],
]) / math.sqrt(2.0)


def preset(loader, name):
    return loader.load_config(str(loader.resolve_preset(name)))


def death_of(**sections):
    return summarize(simulate(parse_config(**sections))).death


def test_common_bath_at_resonance_keeps_entanglement():
    # x₋ の不変量は e^(4r) 倍に増幅されるので積分の許容誤差を詰める
    sim = simulate(parse_config(topology={'variant': 'common'}, dynamics={'rtol': 1e-11, 'atol': 1e-13}))
    values = np.array([log_negativity(s) for s in sim.trajectory.states])
    assert np.all(values > 0)
    assert summarize(sim).death.is_censored

    invariants = [np.linalg.det(RELATIVE_MODE @ s.sigma @ RELATIVE_MODE.T) for s in sim.trajectory.states]
    np.testing.assert_allclose(invariants, invariants[0], rtol=1e-6)


def test_detuned_common_bath_loses_entanglement():
    death = death_of(topology={'variant': 'common'}, system={'omega2': 1.5, 'lam': 0.0})
    assert death.is_finite


def test_separate_baths_survive_longer_when_detuned():
    resonant = death_of(system={'omega2': 1.0, 'lam': 0.3})
    detuned = death_of(system={'omega2': 2.0, 'lam': 0.3})
    assert resonant.is_finite
    assert detuned.value > resonant.value


def test_opposite_coupling_and_squeezing_are_equivalent():
    dynamics = {'horizon': 100.0, 'sample_dt': 0.05, 'settle_window': 10.0}
    plus = simulate(parse_config(system={'lam': 0.3}, initial={'r': 2.0}, dynamics=dynamics))
    minus = simulate(parse_config(system={'lam': -0.3}, initial={'r': -2.0}, dynamics=dynamics))
    e_plus = [log_negativity(s) for s in plus.trajectory.states]
    e_minus = [log_negativity(s) for s in minus.trajectory.states]
    np.testing.assert_allclose(e_minus, e_plus, rtol=0, atol=1e-8)


def test_tuned_weights_protect_entanglement(loader):
    cfg = preset(loader, 'eq12')
    tuned, perturbed, _ = (cfg.with_overrides(v.overrides) for v in cfg.variants)

    assert summarize(simulate(tuned)).death.is_censored

    # 重みをずらすと Q₊ も浴に結合し、終端より前にエンタングルメントが消える
    sim = simulate(perturbed)
    death = summarize(sim).death
    assert death.is_finite
    assert death.value < perturbed.dynamics.horizon
    assert is_dissipative(sim.generator)
    assert log_negativity(steady_state(sim.generator)) == 0.0


def test_memory_effects_on_death_time(loader):
    result = run_compare(preset(loader, 'fig9a'))
    summary = result.summary()
    assert result.markov_summary.death.is_finite
    assert result.nonmarkov_summary.death.is_finite
    assert abs(summary['relative_delta_t_F']) <= 0.10


def test_memory_effects_from_vacuum(loader):
    result = run_compare(preset(loader, 'fig9b'))
    summary = result.summary()
    assert result.markov_summary.death.is_finite
    assert result.nonmarkov_summary.death.is_finite
    # 係数の立ち上がり（~1/Λ）の間は拡散が小さいぶん、生成される E_N が大きく長持ちする
    assert summary['ratio_max_E_N'] > 1.03
    assert summary['delta_t_F'] > 0


def test_twin_correlation_tracks_entanglement(loader):
    summary = summarize(simulate(preset(loader, 'fig8')))
    assert summary.death.is_finite
    assert summary.twin_death.is_finite
    assert abs(summary.twin_death.value - summary.death.value) < 2.0 * math.pi


def test_preset_output_is_reproducible(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = str(PRESETS_DIR / 'fig8.yaml')
    assert cli.main(['run', config, '--output', 'first.csv']) == cli.EXIT_OK
    assert cli.main(['run', config, '--output', 'second.csv']) == cli.EXIT_OK
    assert (tmp_path / 'first.csv').read_bytes() == (tmp_path / 'second.csv').read_bytes()
