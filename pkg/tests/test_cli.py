"""
Command-line surface.

Coverage:
- Every command in text and JSON form
- Exit codes: 0 success, 1 failing suite, 2 library or usage error
"""

import json
import pytest
import sys
from pathlib import Path

# Repo root on the path so the package imports as src
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.main import main


def run_json(capsys, *argv):
    code = main([*argv, '--format', 'json'])
    return code, json.loads(capsys.readouterr().out)


class TestCompose:
    def test_text(self, capsys):
        assert main(['compose', 'perm[12] o_1 perm[21]']) == 0
        assert capsys.readouterr().out == 'perm[213]\n'

    def test_json(self, capsys):
        code, data = run_json(capsys, 'compose', 'e2 bullet e2')
        assert code == 0
        assert data['result'] == {'terms': [{'key': 'e3', 'coeff': '2'}]}

    def test_forced_operad(self, capsys):
        """--operad picks the composition for ambiguous keys"""
        code, data = run_json(capsys, 'compose', 'qo{2} o_1 qo{2}', '--operad', 'qo')
        assert code == 0
        assert data['result']['terms'] == [{'key': 'qo{3}', 'coeff': '1'}]

    def test_syntax_error(self, capsys):
        assert main(['compose', 'perm[12] o_1']) == 2
        assert capsys.readouterr().out == ''

    def test_family_mismatch(self):
        assert main(['compose', 'perm[12] o_1 e2']) == 2

    def test_bad_literal(self, capsys):
        """A zero denominator exits 2 with nothing on stdout"""
        assert main(['compose', '3/0 * e2']) == 2
        assert capsys.readouterr().out == ''

    def test_pair_bullet(self, capsys):
        """bullet on decorated pairs is the insertion product"""
        assert main(['compose', 'dpair[a[a]; 1] bullet dpair[a; 1]']) == 0
        assert capsys.readouterr().out == '2 dpair[a[a]; 1]\n'


class TestBialgebras:
    def test_coproduct(self, capsys):
        """Three admissible cuts on the ladder"""
        code, data = run_json(capsys, 'coproduct', '--algebra', 'a*', 'dtree[a[a]]')
        assert code == 0
        assert data['kind'] == 'ck'
        assert len(data['result']['terms']) == 3

    def test_product(self, capsys):
        """• * • = •·• + ladder"""
        code, data = run_json(capsys, 'product', '--algebra', 'a', 'dtree[a]', 'dtree[a]')
        assert code == 0
        assert len(data['result']['terms']) == 2

    def test_unknown_algebra(self):
        with pytest.raises(SystemExit) as excinfo:
            main(['coproduct', '--algebra', 'zz', 'e1'])
        assert excinfo.value.code == 2


class TestMonoid:
    def test_com_diamond(self, capsys):
        """(e1 + e2) ◊ (e1 + e2) has e4 with coefficient 1"""
        code, data = run_json(capsys, 'monoid', '--op', 'diamond', '--operad', 'com', 'e1 + e2', 'e1 + e2')
        assert code == 0
        assert data['result']['bound'] == 4
        assert data['result']['components']['4'] == {'terms': [{'key': 'orb(e4)', 'coeff': '1'}]}

    def test_inverse(self, capsys):
        code, data = run_json(capsys, 'monoid', '--op', 'inverse', '--operad', 'com', '--bound', '2', 'e2')
        assert code == 0
        assert data['result']['components']['2'] == {'terms': [{'key': 'orb(e2)', 'coeff': '-1'}]}

    def test_missing_operand(self):
        assert main(['monoid', '--op', 'diamond', 'e1']) == 2


class TestVerify:
    def test_pass(self, capsys):
        assert main(['verify', '--suite', 'prelie', '--bound', '3']) == 0
        assert capsys.readouterr().out.startswith('prelie: PASS (')

    def test_fail(self, capsys):
        """A mutated operad makes the run exit 1"""
        code, data = run_json(capsys, 'verify', '--suite', 'prelie', '--operad', 'com',
                              '--params', 'bound=4', 'mutation=sign')
        assert code == 1
        assert data['passed'] is False
        assert data['reports'][0]['failures']

    def test_bad_params(self):
        assert main(['verify', '--suite', 'prelie', '--params', 'bound']) == 2
        assert main(['verify', '--suite', 'prelie', '--params', 'bund=2']) == 2


class TestTablesAndEnumeration:
    def test_list(self, capsys):
        assert main(['table', '--list']) == 0
        assert capsys.readouterr().out.split()[:2] == ['as-composition', 'qo-composition']

    def test_golden_json(self, capsys):
        assert main(['table', '--golden', 'theta', '--format', 'json']) == 0
        data = json.loads(capsys.readouterr().out)
        assert data['id'] == 'theta'
        assert len(data['rows']) == 4

    def test_enumerate_trees(self, capsys):
        """9 labelled trees on 3 vertices in 2 orbits"""
        code, data = run_json(capsys, 'enumerate', '--family', 'tree', '--size', '3')
        assert code == 0
        assert data['count'] == 9
        assert data['orbits'] == 2

    def test_enumerate_text(self, capsys):
        assert main(['enumerate', '--family', 'perm', '--size', '2']) == 0
        assert capsys.readouterr().out.splitlines() == ['# perm size 2: 2 objects, 1 orbits', 'perm[12]', 'perm[21]']

    def test_decorated_families_have_no_orbits(self, capsys):
        code, data = run_json(capsys, 'enumerate', '--family', 'dtree', '--size', '2', '--colors', '2')
        assert code == 0
        assert data['orbits'] is None
        assert data['count'] == 4


if __name__ == '__main__':
    pytest.main([__file__, '-v', '--tb=short'])
