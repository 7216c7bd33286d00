"""Acceptance suite: one test per exit criterion, one printed line per result.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Criterion 2 fails by construction: the closed-form optimum equals the
quality bound at the balanced input |alpha|^2 = 1/2, and for 39 of the 78
(N, M) pairs with N <= 12 (first at N=6, M=5) the bound's true minimum over
input states is strictly lower, by up to ~3.5e-2. The toolkit reports both
numbers and their gap; the strict agreement check documents the discrepancy.
"""

import math
import time

import numpy as np

from qdel.deletion import optimal_quality
from qdel.fidelity import average_fidelity, point_fidelities, rho_a, rho_ab, rho_b
from qdel.hilbert import basis_ket, haar_qubit, ket
from qdel.machines import (
    DeleterKind,
    classify_deleter,
    conditional_deleter,
    deletion_residual,
    qudit_pair_deleter,
    swap_deleter,
)
from qdel.nogo import nonorthogonal_constraints, sweep_overlap
from qdel.reports import sub_seed
from qdel.signalling import (
    basis_invariance_check,
    bob_delete_and_reduce,
    deletion_mixture_closed_form,
    signalling_distance,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)
SEED = 0


def report_line(num: int, ok: bool, detail: str) -> str:
    line = f"ACCEPTANCE {num:02d} [{'PASS' if ok else 'FAIL'}] {detail}"
    print(line)
    return line


def random_qubit_amplitudes(rng):
    theta = math.acos(1.0 - 2.0 * rng.random())
    phi = 2.0 * math.pi * rng.random()
    return math.cos(theta / 2.0), math.sin(theta / 2.0) * complex(math.cos(phi), math.sin(phi))


def test_criterion_01_two_to_one_quality_formula():
    """Closed-form optimal quality of 2-to-1 deletion is 0.70711 +- 1e-5."""
    start = time.perf_counter()
    value = optimal_quality(2, 1).formula_value
    elapsed = time.perf_counter() - start
    ok = abs(value - 0.70711) <= 1e-5 and elapsed < 1.0
    line = report_line(1, ok, f"formula_value={value:.6f}, runtime={elapsed:.3f}s")
    assert ok, line


def test_criterion_02_closed_form_versus_grid_minimum():
    """|grid-minimized bound - closed form| <= 1e-6 for all 1 <= M <= N <= 12.

    Genuinely unattainable: the closed form is the bound evaluated at the
    balanced state, which is not the global minimum for 39 of the 78 pairs.
    The check is implemented exactly as stated and left to fail.
    """
    start = time.perf_counter()
    violations = []
    for n in range(1, 13):
        for m in range(1, n + 1):
            r = optimal_quality(n, m)
            if r.agreement > 1e-6:
                violations.append((n, m, r.agreement))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 10.0
    worst = max(violations, key=lambda v: v[2]) if violations else None
    detail = (
        f"{len(violations)} of 78 pairs exceed 1e-6 "
        f"(first {violations[0] if violations else None}, worst {worst}), "
        f"runtime={elapsed:.2f}s"
    )
    line = report_line(2, ok, detail)
    assert ok, (
        line
        + " -- the closed form equals the bound at |alpha|^2 = 1/2, which is not"
        " the global minimum once N and M are both large enough; the bound dips"
        " lower off-balance (e.g. N=6, M=5: min 0.9971074 at |alpha|^2 ~ 0.321"
        " versus closed form 0.9971911)."
    )


def test_criterion_03_exponential_decay_of_n_to_one_quality():
    """Optimal N-to-1 quality equals 2^(-(N-1)/2) exactly for N = 1..11."""
    values = [(n, optimal_quality(n, 1).formula_value, 2.0 ** (-(n - 1) / 2)) for n in range(1, 12)]
    ok = all(got == want for _, got, want in values)
    line = report_line(3, ok, f"N=1..11 closed form matches 2^(-(N-1)/2) exactly: {ok}")
    assert ok, (line, values)


def test_criterion_04_pointwise_fidelities_through_the_pipeline():
    """F_b(1/2) = 0.75 and F_a(1/2) = 0.5 to 1e-12, machine -> trace -> overlap."""
    f_b, f_a = point_fidelities(INV_SQRT2, INV_SQRT2)
    ok = abs(f_b - 0.75) <= 1e-12 and abs(f_a - 0.5) <= 1e-12
    line = report_line(4, ok, f"F_b={f_b!r}, F_a={f_a!r}")
    assert ok, line


def test_criterion_05_average_fidelities_by_quadrature():
    """256x256 quadrature gives 5/6 and 2/3 within 1e-6, in under 5 s."""
    start = time.perf_counter()
    avg_b = average_fidelity("b", 256, 256)
    avg_a = average_fidelity("a", 256, 256)
    elapsed = time.perf_counter() - start
    err_b = abs(avg_b - 5.0 / 6.0)
    err_a = abs(avg_a - 2.0 / 3.0)
    ok = err_b <= 1e-6 and err_a <= 1e-6 and elapsed < 5.0
    line = report_line(
        5, ok, f"avg_F_b={avg_b:.8f} (err {err_b:.2e}), avg_F_a={avg_a:.8f} "
        f"(err {err_a:.2e}), runtime={elapsed:.2f}s"
    )
    assert ok, line


def test_criterion_06_reduced_states_emerge_from_partial_traces():
    """Closed forms of the three reduced matrices from the output state, 1e-12, 1000 states."""
    rng = np.random.default_rng(sub_seed(SEED, "fidelity", "emergence"))
    blank = np.zeros((2, 2)); blank[0, 0] = 1.0
    p0 = np.diag([1.0, 0.0]); p1 = np.diag([0.0, 1.0])
    plus_pair = np.zeros((4, 4)); plus_pair[1:3, 1:3] = 0.5
    eye = np.eye(2)
    worst = 0.0
    for _ in range(1000):
        alpha, beta = random_qubit_amplitudes(rng)
        x, y = abs(alpha) ** 2, abs(beta) ** 2
        dev_ab = np.max(np.abs(
            rho_ab(alpha, beta).entries
            - (x**2 * np.kron(p0, blank) + y**2 * np.kron(p1, blank) + 2 * x * y * plus_pair)
        ))
        dev_b = np.max(np.abs(rho_b(alpha, beta).entries - ((1 - 2 * x * y) * blank + x * y * eye)))
        dev_a = np.max(np.abs(rho_a(alpha, beta).entries - (x**2 * p0 + y**2 * p1 + x * y * eye)))
        worst = max(worst, float(dev_ab), float(dev_b), float(dev_a))
    ok = worst <= 1e-12
    line = report_line(6, ok, f"max deviation over 1000 random states: {worst:.2e}")
    assert ok, line


def test_criterion_07_nonorthogonal_no_go():
    """Sweep residual vanishes only at s = 1; quadratic clash at s = 1/sqrt2."""
    reports = sweep_overlap(1000)
    zero_only_at_one = reports[-1].max_residual == 0.0 and all(
        r.max_residual > 0.0 for r in reports[:-1]
    )
    point = nonorthogonal_constraints(
        basis_ket([2], 0), ket([INV_SQRT2, math.sqrt(1.0 - 0.5)], [2]), basis_ket([2], 0)
    )
    clash = point.constraints[0].residual
    expected = abs(0.5 - INV_SQRT2)
    pointwise = abs(clash - expected) <= 1e-12
    ok = zero_only_at_one and pointwise
    line = report_line(
        7, ok, f"zero only at s=1: {zero_only_at_one}; "
        f"s^2=s residual at 1/sqrt2: {clash:.12f} vs {expected:.12f}"
    )
    assert ok, line


def test_criterion_08_no_deletion_witness():
    """Any garbage choice leaves a residual > 0.01 on some of 100 Haar states."""
    rng = np.random.default_rng(sub_seed(SEED, "machines", "witness"))
    floors = []
    for _ in range(20):
        garbage = {}
        for pair in ((0, 1), (1, 0)):
            v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            garbage[pair] = ket(v / np.linalg.norm(v), [2, 2])
        machine = qudit_pair_deleter(2, garbage=garbage)
        floors.append(max(deletion_residual(machine, haar_qubit(rng)) for _ in range(100)))
    ok = min(floors) > 0.01
    line = report_line(
        8, ok, f"smallest max-residual over 20 garbage assignments: {min(floors):.4f}"
    )
    assert ok, line


def test_criterion_09_swap_only_classification():
    """Swap machine classified SwapLike (ancilla reconstructs the state); conditional approximate."""
    swap_verdict = classify_deleter(swap_deleter(2), samples=100, seed=sub_seed(SEED, "machines", "swap"))
    cond_verdict = classify_deleter(
        conditional_deleter(), samples=100, seed=sub_seed(SEED, "machines", "conditional")
    )
    ok = (
        swap_verdict.kind is DeleterKind.SWAP_LIKE
        and max(swap_verdict.ancilla_errors) < 1e-8
        and cond_verdict.kind is DeleterKind.APPROXIMATE_DELETER
    )
    line = report_line(
        9, ok, f"swap: {swap_verdict.kind.value} (max ancilla error "
        f"{max(swap_verdict.ancilla_errors):.2e}); conditional: {cond_verdict.kind.value}"
    )
    assert ok, line


def test_criterion_10_no_signalling():
    """Control distance < 1e-12 on 50 random pairs; deleter signals by exactly 1/4."""
    start = time.perf_counter()
    rng = np.random.default_rng(sub_seed(SEED, "signalling", "pairs"))
    worst_control = 0.0
    for _ in range(50):
        r = signalling_distance(rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi))
        worst_control = max(worst_control, r.distance_without)
    headline = signalling_distance(0.0, math.pi / 4)
    # pinned by the eigenvalue oracle: the two mixtures differ by exactly 1/4
    pinned = abs(headline.distance_with - 0.25) <= 1e-12

    worst_pipeline = 0.0
    for _ in range(50):
        theta = rng.uniform(0, 2 * math.pi)
        dev = np.max(np.abs(
            bob_delete_and_reduce(theta).entries - deletion_mixture_closed_form(theta).entries
        ))
        worst_pipeline = max(worst_pipeline, float(dev))
    elapsed = time.perf_counter() - start
    ok = (
        worst_control < 1e-12
        and headline.distance_with > 0.05
        and pinned
        and worst_pipeline <= 1e-12
        and elapsed < 5.0
    )
    line = report_line(
        10, ok, f"control<{worst_control:.1e}, signal={headline.distance_with!r} (pinned 0.25), "
        f"pipeline-vs-closed-form<{worst_pipeline:.1e}, runtime={elapsed:.2f}s"
    )
    assert ok, line


def test_criterion_11_singlet_basis_invariance():
    """Rotated-basis expansion of the two singlets matches the fixed pattern, 50 random angles."""
    rng = np.random.default_rng(sub_seed(SEED, "signalling", "invariance"))
    worst = max(basis_invariance_check(rng.uniform(0, 2 * math.pi)) for _ in range(50))
    ok = worst < 1e-12
    line = report_line(11, ok, f"max expansion residual over 50 angles: {worst:.2e}")
    assert ok, line
