"""
Property suites.

Coverage:
- Every suite passes at small bounds on the unmutated structures
- Mutation hooks make the matching suites fail with counterexamples
- Parameter parsing, reports and determinism
"""

import pytest
import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from tools.errors import UnknownSuiteError, UnsupportedOperationError
from tools.verify import SUITES, SuiteParams, run_suite


# ========== PASSING SUITES ==========

class TestOperadSuites:
    """Axioms of the operads and their induced brackets."""

    @pytest.mark.parametrize('operad, mode, bound', [
        ('com', 'circ', 4), ('as', 'circ', 3), ('prelie', 'circ', 3),
        ('qo', 'circ', 3), ('o', 'circ', 3), ('sg', 'nabla', 3), ('ncsg', 'circ', 3),
    ])
    def test_operad_assoc(self, operad, mode, bound):
        """Unit, associativity and equivariance"""
        report = run_suite('operad-assoc', {'operad': operad, 'mode': mode, 'bound': bound})
        assert report.passed, report.to_text()
        assert report.cases > 0

    def test_prelie_case_count(self):
        """All labelled triples with composed arity <= 4, and the report says so"""
        report = run_suite('prelie', {'bound': 4})
        assert report.passed, report.to_text()
        assert report.cases == 354
        assert report.scope == 'every labelled triple of prelie with arity(x) + arity(y) + arity(z) - 2 <= 4'
        assert report.to_text().splitlines()[1] == f"  scope: {report.scope}"
        assert report.to_json()['scope'] == report.scope

    @pytest.mark.parametrize('operad', ['com', 'qo'])
    def test_prelie_other_operads(self, operad):
        """Every operad gives a pre-Lie product"""
        report = run_suite('prelie', {'operad': operad, 'bound': 3})
        assert report.passed, report.to_text()

    @pytest.mark.parametrize('suite', ['brace', 'binf', 'dendriform'])
    def test_brace_family(self, suite):
        """Brace relations and the products they induce"""
        report = run_suite(suite, {'bound': 3})
        assert report.passed, report.to_text()

    def test_quasi_shuffle(self):
        """Oracle, associativity and bialgebra"""
        report = run_suite('qshuffle')
        assert report.passed, report.to_text()


class TestBialgebraSuites:
    """Coproducts, pairings and antipodes."""

    @pytest.mark.parametrize('handle, operad', [
        ('a*', 'prelie'), ('a', 'prelie'), ('dt*', 'com'), ('dt', 'com'), ('d*', 'prelie'), ('dpl*', 'prelie'),
    ])
    def test_bialgebra(self, handle, operad):
        """Coassociativity, counits and multiplicativity"""
        report = run_suite('bialgebra', {'handle': handle, 'operad': operad, 'bound': 3})
        assert report.passed, report.to_text()

    def test_bialgebra_all_handles(self):
        """Every handle at size 2"""
        report = run_suite('bialgebra', {'bound': 2})
        assert report.passed, report.to_text()

    @pytest.mark.parametrize('pairing, operad', [
        ('dt-prime', 'com'), ('dt-prime', 'as'), ('b-star', 'prelie'), ('ck-gl', 'prelie'),
        ('ec-insert', 'prelie'), ('ideal', 'prelie'),
    ])
    def test_pairing(self, pairing, operad):
        """Dual coproducts transpose their products"""
        report = run_suite('pairing', {'handle': pairing, 'operad': operad, 'bound': 3})
        assert report.passed, report.to_text()

    def test_antipode(self):
        """S * Id = u eps on the connected handles"""
        report = run_suite('antipode', {'bound': 3})
        assert report.passed, report.to_text()

    @pytest.mark.parametrize('family, bound', [('qo', 3), ('dg', 2)])
    def test_ideal(self, family, bound):
        """Ideal coproducts of quasi-orders and digraphs"""
        report = run_suite('ideal', {'family': family, 'bound': bound})
        assert report.passed, report.to_text()

    @pytest.mark.parametrize('colors, bound', [(1, 3), (2, 2)])
    def test_cointeraction(self, colors, bound):
        """Comodule-bialgebra axioms of the tree pair"""
        report = run_suite('cointeraction', {'colors': colors, 'bound': bound})
        assert report.passed, report.to_text()


class TestMonoidSuite:
    """Character monoids."""

    def test_com(self):
        """Power-series oracles and inverses on Com"""
        report = run_suite('monoid', {'operad': 'com', 'bound': 4, 'samples': 2})
        assert report.passed, report.to_text()

    def test_prelie(self):
        """PreLie coinvariants and the tree action"""
        report = run_suite('monoid', {'operad': 'prelie', 'bound': 3, 'samples': 2})
        assert report.passed, report.to_text()


# ========== MUTATIONS ==========

class TestMutations:
    """Broken structures are caught."""

    def test_sign_breaks_operad_units(self):
        """Negated o_1 breaks the right unit"""
        report = run_suite('operad-assoc', {'operad': 'com', 'bound': 3, 'mutation': 'sign'})
        assert not report.passed
        assert report.failures[0].inputs[0] == 'right unit'

    def test_sign_breaks_prelie(self):
        """Negated o_1 breaks the pre-Lie identity on Com"""
        report = run_suite('prelie', {'operad': 'com', 'bound': 4, 'mutation': 'sign'})
        assert not report.passed

    def test_drop_breaks_bialgebra(self):
        """Removing x ⊗ 1 breaks the counit law"""
        report = run_suite('bialgebra', {'handle': 'a*', 'bound': 2, 'mutation': 'drop'})
        assert not report.passed

    def test_swap_breaks_bialgebra(self):
        """The opposite coproduct is coassociative and counital, the transpose check catches it"""
        report = run_suite('bialgebra', {'handle': 'a*', 'bound': 3, 'mutation': 'swap'})
        assert not report.passed
        assert {f.inputs[0] for f in report.failures} == {'a* transpose'}

    def test_bialgebra_transpose_on_dual_handles(self):
        """Unmutated dual handles pass the transpose check inside the bialgebra suite"""
        report = run_suite('bialgebra', {'handle': 'dt*', 'operad': 'as', 'bound': 3})
        assert report.passed, report.to_text()

    def test_swap_breaks_pairing(self):
        """CK is not cocommutative"""
        report = run_suite('pairing', {'handle': 'ck-gl', 'bound': 3, 'mutation': 'swap'})
        assert not report.passed

    def test_keep_limits_failures(self):
        """Counterexamples are capped, failures are all counted"""
        report = run_suite('operad-assoc', {'operad': 'com', 'bound': 3, 'mutation': 'sign'}, keep=1)
        assert len(report.failures) == 1
        assert report.failed >= 1

    def test_sign_not_for_coproducts(self):
        """sign applies to operads only"""
        with pytest.raises(UnsupportedOperationError):
            run_suite('bialgebra', {'handle': 'a*', 'bound': 1, 'mutation': 'sign'})

    def test_drop_not_for_operads(self):
        """drop applies to coproducts only"""
        with pytest.raises(UnsupportedOperationError):
            run_suite('prelie', {'bound': 2, 'mutation': 'drop'})


# ========== PARAMETERS AND REPORTS ==========

class TestParams:
    """Parameter parsing and report output."""

    def test_string_values_coerced(self):
        """CLI strings become integers"""
        params = SuiteParams.from_mapping({'bound': '3', 'seed': '7'}, {'operad': 'com'})
        assert params.bound == 3
        assert params.seed == 7
        assert params.operad == 'com'

    def test_aliases(self):
        """max-vertices and max_arity name the bound"""
        assert SuiteParams.from_mapping({'max-vertices': 2}, {}).bound == 2
        assert SuiteParams.from_mapping({'max_arity': 5}, {}).bound == 5

    def test_unknown_parameter(self):
        """Typos are rejected"""
        with pytest.raises(UnsupportedOperationError):
            SuiteParams.from_mapping({'bund': 3}, {})

    def test_unknown_mutation(self):
        """Only the listed mutations exist"""
        with pytest.raises(UnsupportedOperationError):
            SuiteParams.from_mapping({'mutation': 'scramble'}, {})

    def test_unknown_suite(self):
        """Unknown ids name the registered suites"""
        with pytest.raises(UnknownSuiteError, match='operad-assoc'):
            run_suite('associativity')

    def test_registry(self):
        """Every documented suite is registered"""
        assert set(SUITES) == {
            'operad-assoc', 'prelie', 'brace', 'binf', 'dendriform', 'bialgebra', 'pairing',
            'cointeraction', 'monoid', 'antipode', 'qshuffle', 'ideal',
        }

    def test_report_text_and_json(self):
        """PASS line and JSON payload"""
        report = run_suite('prelie', {'operad': 'com', 'bound': 3})
        assert report.to_text().startswith('prelie: PASS (')
        data = report.to_json()
        assert data['passed'] is True
        assert data['params']['operad'] == 'com'
        assert data['failures'] == []

    def test_deterministic(self):
        """Same seed, same report"""
        params = {'operad': 'com', 'bound': 3, 'samples': 2, 'seed': 5}
        assert run_suite('monoid', params).to_json() == run_suite('monoid', params).to_json()


if __name__ == '__main__':
    pytest.main([__file__, '-v', '--tb=short'])
