# -*- coding: utf-8 -*-
"""
結果ファイル、スキャン、比較、コマンドライン
"""

import json
import logging
import math

import pytest
import yaml

from src import simulate as cli
from src.core.errors import NonFiniteState
from src.core.experiment import low_temperature_notes, resolve_topology, simulate, validity_notes
from src.core.grid_scanner import GridScanner
from src.core.logger import SimLogger
from src.core.model import normal_modes, validate_params
from src.core.preview_generator import PreviewGenerator
from src.core.record_writer import RecordWriter
from src.handlers.compare_handler import COMPARE_COLUMNS, run_compare
from src.handlers.run_handler import RUN_COLUMNS, expand_variants, run_single
from src.handlers.scan_handler import RESULT_COLUMNS, run_scan, scan_columns
from tests.conftest import base_config, make_params, parse_config

SHORT = {'horizon': 20.0, 'sample_dt': 0.5, 'settle_window': 5.0}

SMALL_GRID = {'axes': [
    {'name': 'omega2', 'values': [1.0, 1.5]},
    {'name': 'lam', 'values': [0.2, 1.2]},
]}


def write_config(path, mode='Run', **sections):
    path.write_text(yaml.safe_dump(base_config(mode, **sections), allow_unicode=True), encoding='utf-8')
    return str(path)


# =====================================
# RecordWriter
# =====================================

def test_csv_layout(tmp_path):
    path = tmp_path / 'out.csv'
    metadata = {'tool': 'sim 0.0', 'rtol': 1e-9, 'config': {'bath': {'kT': 10.0}}}
    with RecordWriter(str(path), ['a', 'b', 'c'], metadata) as writer:
        writer.write({'a': 0.1, 'b': True, 'c': math.inf})
        writer.write({'a': 2})
        writer.write_summary({'delta': 1.5, 'ratio': math.nan})
    assert writer.records_written == 2
    assert path.read_text(encoding='utf-8') == (
        "# tool: sim 0.0\n"
        "# rtol: 1e-09\n"
        "# config:\n"
        "#   bath:\n"
        "#     kT: 10.0\n"
        "a,b,c\n"
        "0.1,true,inf\n"
        "2,,\n"
        "# summary: delta=1.5\n"
        "# summary: ratio=nan\n"
    )


def test_jsonl_output(tmp_path):
    path = tmp_path / 'out.csv'
    with RecordWriter(str(path), ['a', 'c'], {'tool': 'sim'}, output_format='both') as writer:
        writer.write({'a': 0.25, 'c': -math.inf})
        writer.write_summary({'n': 1})
    assert path.exists()
    lines = (tmp_path / 'out.jsonl').read_text(encoding='utf-8').splitlines()
    assert json.loads(lines[0]) == {'header': {'tool': 'sim'}}
    assert json.loads(lines[1]) == {'a': 0.25, 'c': '-inf'}
    assert json.loads(lines[2]) == {'summary': {'n': 1}}


def test_unknown_column_is_rejected(tmp_path):
    with RecordWriter(str(tmp_path / 'out.csv'), ['a'], {}) as writer:
        with pytest.raises(KeyError):
            writer.write({'a': 1.0, 'b': 2.0})


# =====================================
# Scan
# =====================================

def scan_config():
    return parse_config('Scan', dynamics=SHORT, grid=SMALL_GRID)


def test_scan_columns():
    assert scan_columns(scan_config()) == ['index', 'omega2', 'lam'] + RESULT_COLUMNS


def test_run_scan_keeps_grid_order():
    records = list(run_scan(scan_config(), threads=2))
    assert [r['index'] for r in records] == [0, 1, 2, 3]
    assert [(r['omega2'], r['lam']) for r in records] == [(1.0, 0.2), (1.0, 1.2), (1.5, 0.2), (1.5, 1.2)]

    skipped = records[1]
    assert skipped['status'] == 'skipped'
    assert 'UnstablePotential' in skipped['error']
    assert 't_F' not in skipped

    for record in (records[0], records[2], records[3]):
        assert record['status'] in ('finite', 'censored', 'never_entangled')
        assert record['peak_E_N'] >= 4.0 / math.log(2.0) - 1e-9
        assert record['censored'] == (record['status'] == 'censored')


def test_scan_records_failures_and_continues(tmp_path, monkeypatch):
    import src.handlers.scan_handler as scan_handler

    real = scan_handler.simulate

    def flaky(cfg):
        if cfg.system.omega2 == 1.5:
            raise NonFiniteState("発散")
        return real(cfg)

    monkeypatch.setattr(scan_handler, 'simulate', flaky)
    with SimLogger(str(tmp_path / 'logs')) as logger:
        records = list(run_scan(scan_config(), logger=logger))
        path = logger.log_filepath
    assert [r['status'] for r in records[2:]] == ['failed', 'failed']
    assert records[2]['error'] == 'NonFiniteState'
    assert records[0]['status'] != 'failed'
    assert "#2 {'omega2': 1.5, 'lam': 0.2}: NonFiniteState: 発散" in path.read_text(encoding='utf-8')


def _scan_bytes(tmp_path, threads):
    cfg = scan_config()
    path = tmp_path / f"scan_{threads}.csv"
    with RecordWriter(str(path), scan_columns(cfg), {'config': cfg.raw}) as writer:
        for record in run_scan(cfg, threads=threads):
            writer.write(record)
    return path.read_bytes()


def test_scan_output_is_independent_of_thread_count(tmp_path):
    assert _scan_bytes(tmp_path, 1) == _scan_bytes(tmp_path, 3)


def test_scan_preview():
    points = GridScanner(scan_config()).scan_points()
    text = PreviewGenerator('all').generate_scan_preview(points)
    assert '計算する点 (3件)' in text
    assert 'スキップする点 (1件)' in text
    assert 'omega2=1, lam=1.2' in text


def scan_records(**sections):
    return list(run_scan(parse_config('Scan', **sections)))


def test_never_entangled_point_has_no_death_time():
    records = scan_records(dynamics=SHORT, grid={'axes': [{'name': 'r', 'values': [0.0, 2.0]}]})
    assert records[0]['status'] == 'never_entangled'
    assert math.isnan(records[0]['t_F'])
    assert records[1]['t_F'] > 0


@pytest.mark.slow
def test_scan_death_time_grows_with_coupling_at_resonance():
    records = scan_records(
        dynamics={'horizon': 150.0, 'settle_window': 15.0},
        grid={'axes': [{'name': 'lam', 'values': [0.0, 0.3, 0.6]}]},
    )
    assert all(r['status'] == 'finite' for r in records)
    t_F = [r['t_F'] for r in records]
    assert t_F[0] < t_F[1] < t_F[2]


@pytest.mark.slow
def test_scan_common_bath_is_censored_only_at_resonance():
    records = scan_records(
        system={'lam': 0.3},
        topology={'variant': 'common'},
        grid={'axes': [{'name': 'omega2', 'values': [1.0, 1.05, 1.1]}]},
    )
    assert [r['status'] for r in records] == ['censored', 'finite', 'finite']
    assert records[0]['t_F'] == math.inf
    assert records[1]['t_F'] > records[2]['t_F']


@pytest.mark.slow
def test_scan_is_symmetric_under_opposite_coupling_and_squeezing():
    dynamics = {'horizon': 100.0, 'settle_window': 10.0}
    plus = scan_records(dynamics=dynamics, system={'omega2': 1.3}, grid={'axes': [
        {'name': 'lam', 'values': [0.2, 0.5]},
        {'name': 'r', 'values': [1.0, 2.0]},
    ]})
    minus = scan_records(dynamics=dynamics, system={'omega2': 1.3}, grid={'axes': [
        {'name': 'lam', 'values': [-0.2, -0.5]},
        {'name': 'r', 'values': [-1.0, -2.0]},
    ]})
    for a, b in zip(plus, minus):
        assert a['status'] == b['status']
        assert b['t_F'] == pytest.approx(a['t_F'], abs=2e-3)
        assert b['peak_E_N'] == pytest.approx(a['peak_E_N'], abs=1e-8)


@pytest.mark.slow
def test_scan_weight_ratio_on_decoupling_curve():
    # c₂ = −1 のとき c₁/|c₂| = cotθ が Q₊ を切り離す
    _, modes = make_params(1.5, 0.3)
    tuned = 1.0 / math.tan(modes.theta)
    records = scan_records(
        system={'omega2': 1.5, 'lam': 0.3},
        topology={'variant': 'weighted_common', 'c1': 1.0, 'c2': -1.0},
        initial={'state': 'normal_mode', 'r': 2.0},
        dynamics={'horizon': 300.0, 'settle_window': 30.0},
        grid={'axes': [{'name': 'weight_ratio', 'values': [tuned, 1.0]}]},
    )
    assert records[0]['status'] == 'censored'
    assert records[1]['status'] == 'finite'


# =====================================
# Run / Compare
# =====================================

def test_run_single_labels_variants():
    cfg = parse_config(dynamics={'horizon': 2.0, 'sample_dt': 0.5, 'settle_window': 0.5}, variants=[
        {'label': 'near', 'system': {'lam': 0.1}},
        {'label': 'far', 'system': {'omega2': 2.0}},
    ])
    assert [label for label, _ in expand_variants(cfg)] == ['near', 'far']
    records = list(run_single(cfg))
    assert len(records) == 10
    assert [r['label'] for r in records] == ['near'] * 5 + ['far'] * 5
    assert set(records[0]) <= set(RUN_COLUMNS)
    assert records[0]['t'] == 0.0 and records[-1]['t'] == 2.0


def test_compare_shares_sample_times():
    cfg = parse_config(
        'Compare',
        bath={'gamma': 0.02 / math.pi, 'cutoff': 20.0, 'kT': 10.0},
        system={'lam': 0.2},
        dynamics={'horizon': 3.0, 'sample_dt': 0.5, 'settle_window': 1.0},
    )
    result = run_compare(cfg)
    assert result.markov.config.dynamics.markovian
    assert not result.nonmarkov.config.dynamics.markovian
    records = result.records()
    assert [r['t'] for r in records] == [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
    assert set(records[0]) == set(COMPARE_COLUMNS)
    assert records[0]['E_N_markov'] == records[0]['E_N_nonmarkov']

    summary = result.summary()
    assert set(summary) == {
        't_F_markov', 't_F_nonmarkov', 'delta_t_F', 'relative_delta_t_F',
        'max_E_N_markov', 'max_E_N_nonmarkov', 'delta_max_E_N', 'ratio_max_E_N',
    }
    assert summary['delta_max_E_N'] == pytest.approx(
        summary['max_E_N_nonmarkov'] - summary['max_E_N_markov']
    )


# =====================================
# コマンドライン
# =====================================

def test_non_markovian_flag_alias():
    assert cli._normalize_argv(['run', 'x.yaml', '--non-markovian']) == ['run', 'x.yaml', '--no-markovian']
    args = cli.build_parser().parse_args(['run', 'x.yaml', '--no-markovian'])
    assert args.markovian is False


def test_cli_missing_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(['run', str(tmp_path / 'missing.yaml')]) == cli.EXIT_CONFIG_ERROR


def test_cli_mode_mismatch(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = write_config(tmp_path / 'scan.yaml', 'Scan', grid=SMALL_GRID)
    assert cli.main(['run', path]) == cli.EXIT_CONFIG_ERROR


def test_cli_unstable_coupling(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = write_config(tmp_path / 'run.yaml', system={'omega2': 1.0, 'lam': 1.5})
    assert cli.main(['run', path]) == cli.EXIT_CONFIG_ERROR


def test_cli_numerical_failure(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = write_config(tmp_path / 'run.yaml', dynamics=SHORT)

    def diverge(cfg):
        raise NonFiniteState("発散")

    monkeypatch.setattr('src.handlers.run_handler.simulate', diverge)
    assert cli.main(['run', path]) == cli.EXIT_NUMERICAL_ERROR


def test_cli_run_writes_results(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = write_config(tmp_path / 'run.yaml', dynamics={'horizon': 5.0, 'sample_dt': 0.5, 'settle_window': 1.0})
    assert cli.main(['run', path, '--output', 'out/run.csv']) == cli.EXIT_OK

    lines = (tmp_path / 'out' / 'run.csv').read_text(encoding='utf-8').splitlines()
    assert lines[0].startswith('# tool: twin-oscillator-entanglement')
    header = [line for line in lines if not line.startswith('#')]
    assert header[0].split(',') == RUN_COLUMNS
    assert len(header) == 1 + 11
    assert any(line.startswith('# summary: test.t_F=') for line in lines)


def test_cli_scan_exit_code_ignores_point_failures(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = write_config(tmp_path / 'scan.yaml', 'Scan', dynamics=SHORT, grid=SMALL_GRID)
    assert cli.main(['scan', path, '--threads', '2', '--format', 'both']) == cli.EXIT_OK
    assert (tmp_path / 'results' / 'test.csv').exists()
    assert (tmp_path / 'results' / 'test.jsonl').exists()


# =====================================
# ログ
# =====================================

def test_logger_writes_dated_file(tmp_path):
    with SimLogger(str(tmp_path / 'logs'), level='WARNING') as logger:
        logger.info("記録されない")
        logger.failure("#3", NonFiniteState("発散"))
        logging.getLogger('src.core.bath').warning("モジュールのログ")
        path = logger.log_filepath
    assert logger.logger.handlers == []
    text = path.read_text(encoding='utf-8')
    assert "記録されない" not in text
    assert "[ERROR] [エラー] #3: NonFiniteState: 発散" in text
    assert "[WARNING] モジュールのログ" in text


def test_disabled_logger_creates_nothing(tmp_path):
    logger = SimLogger(str(tmp_path / 'logs'), enable_logging=False)
    logger.error("無視")
    assert logger.log_filepath is None
    assert not (tmp_path / 'logs').exists()


def test_logger_rejects_unknown_level(tmp_path):
    with pytest.raises(ValueError):
        SimLogger(str(tmp_path), level='LOUD')


def test_low_temperature_markovian_caveat_is_logged(caplog):
    cold = parse_config(bath={'kT': 0.1}, dynamics={'horizon': 1.0, 'sample_dt': 0.5, 'settle_window': 0.5})
    modes = normal_modes(validate_params(cold.system))
    notes = validity_notes(cold, modes, resolve_topology(cold, modes))
    assert len(notes) == 1 and '不確定性関係' in notes[0]

    with caplog.at_level(logging.WARNING, logger='src.core.experiment'):
        simulate(cold)
    assert any('不確定性関係' in record.getMessage() for record in caplog.records)

    hot = parse_config()
    assert validity_notes(hot, modes, resolve_topology(hot, modes)) == []
    assert low_temperature_notes(cold.with_markovian(False), modes) == []
