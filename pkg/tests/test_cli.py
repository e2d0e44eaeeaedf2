import glob
import json
import os

import openpyxl
import pytest

from main import build_parser, main
from zariski_chambers import chambers


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_matrix(tmp_path, text, name='A.txt'):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


def test_delpezzo(capsys):
    code, out, _ = run(capsys, 'delpezzo', '3')
    assert code == 0
    assert 'z = 18' in out.splitlines()
    assert 'per_cardinality' not in out


def test_delpezzo_per_cardinality(capsys):
    code, out, _ = run(capsys, 'delpezzo', '1', '--per-cardinality')
    assert code == 0
    assert 'per_cardinality = {1: 1}' in out


@pytest.mark.parametrize('r', ['9', '0', 'x'])
def test_delpezzo_out_of_range(capsys, r):
    code, _, err = run(capsys, 'delpezzo', r)
    assert code == 2
    assert 'usage' in err


def test_delpezzo_json_matches_text(capsys):
    _, text, _ = run(capsys, 'delpezzo', '4')
    code, out, _ = run(capsys, 'delpezzo', '4', '--format', 'json')
    values = json.loads(out)
    lines = dict(line.split(' = ', 1) for line in text.splitlines())
    assert code == 0
    assert values['z'] == 76
    for key in ('r', 'z', 'negdef_count', 'max_support', 'det_evaluations'):
        assert lines[key] == str(values[key])


def test_delpezzo_csv(capsys):
    code, out, _ = run(capsys, 'delpezzo', '2', '--format', 'csv')
    header, values = out.splitlines()[:2]
    assert code == 0
    assert dict(zip(header.split(','), values.split(',')))['z'] == '5'


def test_delpezzo_parallel(capsys):
    code, out, _ = run(capsys, 'delpezzo', '4', '--threads', '2')
    assert code == 0
    assert 'z = 76' in out


def test_delpezzo_emit_supports(capsys, tmp_path):
    path = tmp_path / 'supports.txt'
    code, out, _ = run(capsys, 'delpezzo', '2', '--emit-supports', str(path))
    assert code == 0
    assert 'z = 5' in out
    assert path.read_text(encoding='utf-8').splitlines() == ['E1', 'E1 E2', 'E2', 'C1_12']


def test_enumerate_negdef(capsys, tmp_path):
    code, out, _ = run(capsys, 'enumerate', write_matrix(tmp_path, '1\n-1\n'), '--mode', 'negdef')
    assert code == 0
    assert out.splitlines()[0] == '1'


def test_enumerate_visit_order(capsys, tmp_path):
    path = write_matrix(tmp_path, '3\n1 0 0\n0 1 0\n0 0 -1\n')
    code, out, _ = run(capsys, 'enumerate', path)
    lines = out.splitlines()
    assert code == 0
    assert lines[:3] == ['1', '1 2', '2']
    assert '# det_evaluations = 7' in lines


def test_enumerate_json(capsys, tmp_path):
    path = write_matrix(tmp_path, '2\n2 1\n1 2\n')
    code, out, _ = run(capsys, 'enumerate', path, '--format', 'json')
    assert code == 0
    assert json.loads(out)['sets'] == [[1], [1, 2], [2]]


def test_enumerate_csv_has_stats_footer(capsys, tmp_path):
    path = write_matrix(tmp_path, '3\n1 0 0\n0 1 0\n0 0 -1\n')
    code, out, _ = run(capsys, 'enumerate', path, '--format', 'csv')
    lines = out.splitlines()
    assert code == 0
    assert lines == ['1', '1,2', '2', '# sets_emitted = 3', '# det_evaluations = 7', '# max_cardinality = 2']


@pytest.mark.parametrize('r, count', [(2, 4), (4, 75)])
def test_matrix_output_counts_again(capsys, tmp_path, r, count):
    _, text, _ = run(capsys, 'matrix', str(r))
    path = write_matrix(tmp_path, text)
    code, out, _ = run(capsys, 'enumerate', path, '--mode', 'negdef', '--count-only')
    assert code == 0
    assert out.splitlines()[0] == str(count)


def test_enumerate_count_only_parallel(capsys, tmp_path):
    _, text, _ = run(capsys, 'matrix', '3')
    path = write_matrix(tmp_path, text)
    code, out, _ = run(capsys, 'enumerate', path, '--mode', 'negdef', '--count-only', '--threads', '2')
    assert code == 0
    assert out.splitlines()[0] == '17'


@pytest.mark.parametrize('text, where', [('2\n1 2\n3 1\n', 'line 2, column 3'), ('2\n1 0\n', 'line')])
def test_enumerate_bad_matrix(capsys, tmp_path, text, where):
    code, _, err = run(capsys, 'enumerate', write_matrix(tmp_path, text))
    assert code == 2
    assert where in err


def test_enumerate_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, 'enumerate', str(tmp_path / 'missing.txt'))
    assert code == 2


def test_matrix_two_points(capsys, tmp_path):
    sidecar = tmp_path / 'labels.txt'
    code, out, _ = run(capsys, 'matrix', '2', '--sidecar', str(sidecar))
    rows = [line for line in out.splitlines() if not line.startswith('#')]
    assert code == 0
    assert rows == ['3', '-1 0 1', '0 -1 1', '1 1 -1']
    assert sidecar.read_text(encoding='utf-8') == 'E1\nE2\nC1_12\n'


@pytest.mark.parametrize('r, n', [(6, 27), (8, 240)])
def test_matrix_size(capsys, r, n):
    code, out, _ = run(capsys, 'matrix', str(r))
    rows = [line for line in out.splitlines() if not line.startswith('#')]
    assert code == 0
    assert rows[0] == str(n)
    assert len(rows) == n + 1


def test_matrix_json(capsys):
    code, out, _ = run(capsys, 'matrix', '2', '--format', 'json')
    values = json.loads(out)
    assert code == 0
    assert values['labels'] == ['E1', 'E2', 'C1_12']
    assert values['matrix'] == [[-1, 0, 1], [0, -1, 1], [1, 1, -1]]


def test_verify(capsys):
    code, out, _ = run(capsys, 'verify', '--max-r', '4')
    assert code == 0
    assert 'all checks passed' in out


def test_verify_detects_corrupted_table(capsys, monkeypatch):
    monkeypatch.setitem(chambers.EXPECTED_Z, 3, 19)
    code, out, _ = run(capsys, 'verify', '--max-r', '3')
    assert code == 1
    assert 'FAIL' in out


def test_verify_export_csv(capsys, tmp_path):
    path = tmp_path / 'report.csv'
    code, _, _ = run(capsys, 'verify', '--max-r', '2', '--export', str(path))
    assert code == 0
    assert path.read_text(encoding='utf-8').splitlines()[0] == 'check,r,expected,measured,status,detail'
    census_lines = (tmp_path / 'report-census.csv').read_text(encoding='utf-8').splitlines()
    assert len(census_lines) == 3


def test_verify_export_xlsx(capsys, tmp_path):
    path = tmp_path / 'report.xlsx'
    code, _, _ = run(capsys, 'verify', '--max-r', '2', '--export', str(path))
    workbook = openpyxl.load_workbook(path)
    assert code == 0
    assert workbook.sheetnames == ['checks', 'census']
    assert workbook['census'].max_row == 3


def test_rep(capsys):
    code, out, _ = run(capsys, 'rep', '2', '--support', 'E1')
    assert code == 0
    assert 'a = 1; P = 3H - E2' in out.splitlines()
    assert 'k_scale = 2' in out.splitlines()


def test_rep_both_exceptional_curves(capsys):
    code, out, _ = run(capsys, 'rep', '2', '--support', 'E1,E2', '--primitive')
    assert code == 0
    assert 'a = 1, 1; P = 3H' in out.splitlines()
    assert 'primitive = H (1/3 P)' in out.splitlines()


def test_rep_not_a_chamber(capsys):
    code, _, err = run(capsys, 'rep', '2', '--support', 'E1,C1_12')
    assert code == 1
    assert 'not a Zariski chamber support' in err


@pytest.mark.parametrize('argv, code', [
    (['--support', 'X9'], 2),
    (['--support', ','], 2),
    (['--support', 'E1', '--ample', '3,1'], 2),
    (['--support', 'E1', '--ample', 'a,b,c'], 2),
    (['--support', 'E1', '--ample', '1,0,0'], 1),
])
def test_rep_errors(capsys, argv, code):
    assert run(capsys, 'rep', '2', *argv)[0] == code


def test_config_sets_output_format(capsys, config_home):
    config_home.mkdir(parents=True, exist_ok=True)
    (config_home / 'config.ini').write_text('[Output]\nformat = json\n', encoding='utf-8')
    code, out, _ = run(capsys, 'delpezzo', '2')
    assert code == 0
    assert json.loads(out)['z'] == 5


def test_invalid_engine_in_config(capsys, config_home):
    config_home.mkdir(parents=True, exist_ok=True)
    (config_home / 'config.ini').write_text('[Enumeration]\nengine = quantum\n', encoding='utf-8')
    assert run(capsys, 'delpezzo', '2')[0] == 2


@pytest.mark.parametrize('argv', [
    ['delpezzo', '2', '--threads', '0'],
    ['verify', '--max-r', '1', '--threads', '0'],
    ['verify', '--max-r', '1', '--oracle-limit', '0'],
    ['verify', '--max-r', '1', '--oracle-limit', '-3'],
])
def test_non_positive_limits_are_rejected(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert 'must be positive' in err


def test_log_file_is_written(capsys, config_home):
    run(capsys, '-v', 'delpezzo', '2')
    assert glob.glob(os.path.join(str(config_home), 'logs', 'zariski-*.log'))


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
