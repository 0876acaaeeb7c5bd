import csv
import json
import os

import jsonlines
import pytest

from harmonic_nav.cli import main, parse_args


def test_defaults():
    args = parse_args(['plan'])
    assert args.scenario == 'surveillance.json'
    assert args.resolution == 64
    assert not args.oriented


def test_low_resolution_is_rejected():
    with pytest.raises(SystemExit) as info:
        parse_args(['field', '--resolution', '16'])
    assert info.value.code == 2


def test_unknown_command():
    with pytest.raises(SystemExit):
        parse_args(['fly'])


def test_missing_scenario(tmp_path):
    assert main(['run', '--scenario', str(tmp_path / 'missing.json'), '--out', str(tmp_path)]) == 2


def test_unknown_fitter(tmp_path):
    assert main(['plan', '--scenario', 'empty.json', '--fitters', 'polygon',
                 '--out', str(tmp_path)]) == 2


def test_plan(tmp_path, capsys):
    assert main(['plan', '--scenario', 'empty.json', '--out', str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert 'Navigation map: 5 nodes, 20 edges.' in out
    assert 'Prefix: a' in out
    assert 'Suffix: a' in out


def test_run_and_replay(tmp_path):
    out = str(tmp_path)
    assert main(['run', '--scenario', 'empty.json', '--out', out]) == 0
    for name in ('trajectory.jsonl', 'events.jsonl', 'metrics.json', 'run.svg'):
        assert os.path.exists(os.path.join(out, name))
    with open(os.path.join(out, 'metrics.json')) as f:
        metrics = json.load(f)
    assert metrics['status'] == 'MissionDone'
    with jsonlines.open(os.path.join(out, 'trajectory.jsonl')) as reader:
        rows = list(reader)
    assert len(rows) == metrics['steps']
    assert set(rows[0]) == set(['t', 'x', 'y', 'theta', 'v', 'omega', 'clearance', 'active_edge'])
    with jsonlines.open(os.path.join(out, 'events.jsonl')) as reader:
        kinds = [event['kind'] for event in reader]
    assert kinds[-1] == 'MissionDone'
    os.remove(os.path.join(out, 'run.svg'))
    assert main(['replay', '--scenario', 'empty.json', '--out', out]) == 0
    assert os.path.exists(os.path.join(out, 'run.svg'))


def test_timeout_exit_code(tmp_path):
    assert main(['run', '--scenario', 'empty.json', '--max-time', '0.2', '--out', str(tmp_path)]) == 1


def test_field(tmp_path):
    out = str(tmp_path)
    assert main(['field', '--scenario', 'empty.json', '--resolution', '32', '--out', out]) == 0
    with open(os.path.join(out, 'field.csv')) as f:
        rows = [[float(value) for value in row] for row in csv.reader(f)]
    assert len(rows) == 32
    assert all(len(row) == 32 for row in rows)
    values = [value for row in rows for value in row]
    assert min(values) >= 0.0
    assert max(values) <= 1.0
    with open(os.path.join(out, 'field.json')) as f:
        header = json.load(f)
    assert header['resolution'] == 32
    assert header['goal'] == [1.0, 0.5]
    (x0, y0), (x1, y1) = header['bounds']
    assert x0 < x1 and y0 < y1
    with open(os.path.join(out, 'quiver.csv')) as f:
        assert next(csv.reader(f)) == ['x', 'y', 'u', 'v']
    assert os.path.exists(os.path.join(out, 'field.svg'))


def test_bench(tmp_path, capsys):
    out = str(tmp_path)
    assert main(['bench', '--sizes', '2', '--trials', '1', '--out', out]) == 0
    with open(os.path.join(out, 'bench.csv')) as f:
        header = next(csv.reader(f))
    assert header[:3] == ['obstacles', 'rebuild_ms', 'update_ms']
    assert 'speedup' in capsys.readouterr().out


def test_bench_missions(tmp_path, capsys):
    out = str(tmp_path)
    assert main(['bench', '--missions', '--scenario', 'empty.json', '--out', out]) == 0
    with open(os.path.join(out, 'missions.csv')) as f:
        rows = list(csv.DictReader(f))
    assert [row['variant'] for row in rows] == ['full', 'fixed', 'direct']
    assert 'travel_distance' in rows[0] and 'turning' in rows[0]
    assert 'direct' in capsys.readouterr().out
