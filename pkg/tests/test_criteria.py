from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import systems

from switchbench.contracts.enums import CertificateKind, MatrixRole
from switchbench.core.criteria import (
    BRUTE_FORCE_LIMIT,
    DilationWitness,
    NonaccessibleSet,
    Verdict,
    decide,
    find_s_dilation,
    find_s_dilation_bruteforce,
    g_rank,
    is_form_I_bruteforce,
    is_form_II_bruteforce,
    lin_criteria,
    max_s_disjoint,
    theorem1_check,
    verify_certificate,
)
from switchbench.core.errors import StructureError, TooLarge
from switchbench.core.graphs import Vertex, accessibility, colored_union_graph, union_graph
from switchbench.core.structured import (
    StructuredMatrix,
    SwitchedSystem,
    stacked_pattern,
    sum_pattern,
)

x1, x2 = Vertex.state(1), Vertex.state(2)


def single(a, b):
    return SwitchedSystem.from_masks([np.array(a, dtype=bool)], [np.array(b, dtype=bool)])


def test_g_rank_examples(two_mode_system):
    assert g_rank(stacked_pattern(two_mode_system)) == 3
    assert g_rank(StructuredMatrix.zeros(3, 3)) == 0
    column = np.zeros((4, 4), dtype=bool)
    column[:, 0] = True
    assert g_rank(StructuredMatrix.from_mask(column, 1, MatrixRole.A)) == 1


def test_two_mode_union_test_finds_a_dilation(two_mode_system):
    assert theorem1_check(two_mode_system) == (True, False)
    assert g_rank(sum_pattern(two_mode_system)) == 2


def test_independent_inputs_share_one_sum_column(independent_b_system):
    # B_1 + B_2 is a single column, so the union test cannot certify this system
    assert theorem1_check(independent_b_system) == (True, False)


def test_isolated_state_fails_the_union_test(chain_system):
    assert theorem1_check(chain_system)[0] is False


def test_two_mode_s_disjoint_edges(two_mode_system):
    count, edges = max_s_disjoint(two_mode_system)
    assert count == 3
    assert [str(e) for e in edges.edges] == ["u1->x3[1]", "u1->x1[2]", "x3->x2[2]"]


def test_all_zero_has_no_s_disjoint_edges(all_zero_system):
    assert max_s_disjoint(all_zero_system)[0] == 0


def test_permutation_pattern_has_n_s_disjoint_edges():
    a = np.zeros((4, 4), dtype=bool)
    a[[1, 2, 3, 0], [0, 1, 2, 3]] = True
    assert max_s_disjoint(single(a, np.zeros((4, 1))))[0] == 4


def test_two_mode_has_no_s_dilation(two_mode_system):
    assert find_s_dilation(two_mode_system) is None
    assert find_s_dilation_bruteforce(two_mode_system) is None


def test_single_input_entry_dilates_the_other_state():
    system = single([[0, 0], [0, 0]], [[1], [0]])
    witness = find_s_dilation(system)
    assert witness.s_set == {x2}
    assert witness.t_size == 0
    assert find_s_dilation_bruteforce(system) == witness


def test_one_state_one_input_has_no_dilation():
    assert find_s_dilation(single([[0]], [[1]])) is None


def test_fan_dilation(fan_system):
    witness = find_s_dilation(fan_system)
    assert witness.s_set == {x1, x2}
    assert witness.t_size == 1
    assert dict(witness.per_color_t) == {1: {Vertex.input(1)}}


def test_decide_two_mode(two_mode_system):
    verdict = decide(two_mode_system)
    assert verdict.controllable
    assert not verdict.theorem1_sufficient
    assert verdict.certificate_kind == CertificateKind.S_DISJOINT
    assert verdict.s_disjoint_count == 3
    # neither subsystem is controllable on its own
    assert verdict.subsystem_lin == (False, False)
    assert verify_certificate(two_mode_system, verdict) == []


def test_decide_independent_inputs(independent_b_system):
    verdict = decide(independent_b_system)
    assert verdict.controllable
    assert verdict.s_disjoint_count == 2


def test_decide_all_zero(all_zero_system):
    verdict = decide(all_zero_system)
    assert not verdict.controllable
    assert isinstance(verdict.certificate, NonaccessibleSet)
    assert verdict.certificate.states == {Vertex.state(i) for i in (1, 2, 3)}
    assert verify_certificate(all_zero_system, verdict) == []


def test_nonaccessible_certificate_takes_priority(chain_system):
    # the chain is also rank deficient (x4 has no incoming edge)
    verdict = decide(chain_system)
    assert not verdict.accessibility_ok and not verdict.rank_ok
    assert verdict.certificate_kind == CertificateKind.NONACCESSIBLE


def test_decide_fan(fan_system):
    verdict = decide(fan_system)
    assert verdict.accessibility_ok and not verdict.rank_ok
    assert verdict.certificate_kind == CertificateKind.DILATION
    assert verify_certificate(fan_system, verdict) == []


def test_tampered_certificate_is_caught(two_mode_system, all_zero_system):
    assert verify_certificate(all_zero_system, decide(two_mode_system))


def test_dilation_with_wrong_in_neighbourhoods_is_caught(fan_system):
    verdict = decide(fan_system)
    forged = DilationWitness(verdict.certificate.s_set, 1, {1: {x1}})
    problems = verify_certificate(fan_system, replace(verdict, certificate=forged))
    assert problems == ["per-color in-neighbourhoods do not match the graph"]

    miscounted = DilationWitness(verdict.certificate.s_set, 0, {})
    assert verify_certificate(fan_system, replace(verdict, certificate=miscounted))


def test_verdict_invariants(two_mode_system):
    certificate = decide(two_mode_system).certificate
    with pytest.raises(StructureError):
        Verdict(True, True, False, certificate, False)
    with pytest.raises(StructureError):
        Verdict(False, False, False, certificate, True)


def test_lin_criteria_per_subsystem(two_mode_system, chain_system):
    assert not lin_criteria(two_mode_system, 1)
    assert not lin_criteria(two_mode_system, 2)
    assert lin_criteria(single([[0, 0], [1, 0]], [[1], [0]]), 1)
    assert not lin_criteria(chain_system, 1)


def test_form_I(two_mode_system, chain_system):
    assert not is_form_I_bruteforce(two_mode_system)
    assert is_form_I_bruteforce(chain_system)


def test_form_II(two_mode_system):
    assert is_form_II_bruteforce(two_mode_system)
    assert not is_form_II_bruteforce(single([[0, 0], [1, 0]], [[1], [0]]))


def test_exhaustive_searches_are_capped():
    n = BRUTE_FORCE_LIMIT + 1
    system = single(np.zeros((n, n)), np.ones((n, 1)))
    for search in (is_form_I_bruteforce, is_form_II_bruteforce, find_s_dilation_bruteforce):
        with pytest.raises(TooLarge):
            search(system)


@settings(max_examples=150, deadline=None)
@given(systems())
def test_rank_conditions_are_equivalent(system):
    count, _ = max_s_disjoint(system)
    no_dilation = find_s_dilation(system) is None
    assert no_dilation == (count == system.n)
    assert no_dilation == (g_rank(stacked_pattern(system)) == system.n)
    assert no_dilation == (find_s_dilation_bruteforce(system) is None)


@settings(max_examples=150, deadline=None)
@given(systems(max_n=6))
def test_union_graph_forms(system):
    accessible = accessibility(union_graph(system)).complete
    assert accessibility(colored_union_graph(system)).complete == accessible
    assert accessible == (not is_form_I_bruteforce(system))
    assert is_form_II_bruteforce(system) == (g_rank(sum_pattern(system)) < system.n)


@settings(max_examples=150, deadline=None)
@given(systems())
def test_certificates_are_sound(system):
    verdict = decide(system)
    assert verify_certificate(system, verdict) == []
    if verdict.theorem1_sufficient:
        assert verdict.controllable


@settings(max_examples=100, deadline=None)
@given(systems(max_m=1))
def test_single_subsystem_reduces_to_lin(system):
    assert decide(system).controllable == lin_criteria(system, 1)


@st.composite
def system_and_extra_entry(draw):
    system = draw(systems())
    i = draw(st.integers(1, system.m))
    role = draw(st.sampled_from([MatrixRole.A, MatrixRole.B]))
    row = draw(st.integers(0, system.n - 1))
    col = draw(st.integers(0, (system.n if role == MatrixRole.A else system.r) - 1))
    return system, i, role, row, col


@settings(max_examples=150, deadline=None)
@given(system_and_extra_entry())
def test_adding_a_free_entry_never_breaks_controllability(case):
    system, i, role, row, col = case
    a_masks = [a.mask() for a, _ in system.subsystems]
    b_masks = [b.mask() for _, b in system.subsystems]
    (a_masks if role == MatrixRole.A else b_masks)[i - 1][row, col] = True
    denser = SwitchedSystem.from_masks(a_masks, b_masks)
    if decide(system).controllable:
        assert decide(denser).controllable
