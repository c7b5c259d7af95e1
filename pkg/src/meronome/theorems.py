"""Batch verification suites for the structure of decomposition-preserving unitaries.

The characterization being exercised: a global unitary preserves a bipartite
decomposition exactly when it keeps every state's Schmidt parameters, and
(on two qubits) exactly when it maps maximally entangled states to maximally
entangled states.  Supporting lemmas relate superpositions of maximally
entangled states to the Hermitian/anti-Hermitian character of the unitary
connecting them.  The checks sample these statements and return Verdicts
with reproducible witnesses instead of raising, so they can run as suites.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .frames import (
    Entanglement,
    Membership,
    MeronomicElement,
    classify,
    factor_as_local,
    schmidt_decompose,
)
from .linalg import BipartiteSplit, Operator, StateVector, phase_fix
from .sampling import (
    RngStream,
    haar_unitary,
    random_m_element,
    random_maxent_state,
    random_product_state,
    random_state,
)

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification check; a failing one carries the exhibit."""

    passed: bool
    detail: str
    witness: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.passed == (self.witness is not None):
            raise ValueError("witness must be present exactly when the check failed")


def relative_unitary(psi: StateVector, phi: StateVector, tol: float = 1e-8) -> Operator:
    """The 2x2 unitary u with (1 (x) u) psi = phi, for maximally entangled two-qubit states.

    Built from the first-qubit-conditioned expansions psi = (|0, p0> + |1, p1>)/sqrt(2)
    as u = |q0><p0| + |q1><p1|; the conditioned vectors of a maximally
    entangled state are orthonormal, which makes u unitary and unique.
    """
    split = BipartiteSplit(2, 2)
    for name, state in (("psi", psi), ("phi", phi)):
        if state.dim != 4:
            raise ValueError(f"{name} must be a two-qubit state, got dim {state.dim}")
        if classify(state, split, tol) is not Entanglement.MAXIMALLY_ENTANGLED:
            raise ValueError(f"{name} is not maximally entangled within {tol}")
    p = psi.amps.reshape(2, 2) * _SQRT2
    q = phi.amps.reshape(2, 2) * _SQRT2
    return Operator(q.T @ p.conj())


def _superposition_entanglement(psi: StateVector, phi: StateVector, tol: float):
    """Classification of (psi + phi)/sqrt(2), or None when it is not even normalized."""
    s = (psi.amps + phi.amps) / _SQRT2
    norm = np.linalg.norm(s)
    if abs(norm - 1.0) > tol:
        return None, s
    return classify(StateVector(s / norm), BipartiteSplit(2, 2), tol), s


def check_lemma_antihermitian(psi: StateVector, phi: StateVector, tol: float = 1e-8) -> Verdict:
    """Equal superposition is maximally entangled iff the relative unitary is anti-Hermitian.

    Tests the biconditional in both directions on one pair of maximally
    entangled two-qubit states.
    """
    u = relative_unitary(psi, phi, tol).entries
    anti = bool(np.abs(u + u.conj().T).max() <= tol)
    cls, s = _superposition_entanglement(psi, phi, tol)
    superposed_maxent = cls is Entanglement.MAXIMALLY_ENTANGLED
    if anti == superposed_maxent:
        return Verdict(True, f"biconditional holds (anti-Hermitian={anti})")
    return Verdict(
        False,
        f"anti-Hermitian={anti} but superposition maximally entangled={superposed_maxent}",
        witness=s,
    )


def check_lemma_hermitian(psi: StateVector, phi: StateVector, tol: float = 1e-8) -> Verdict:
    """Orthogonal pair with Hermitian relative unitary must superpose to a product state."""
    u = relative_unitary(psi, phi, tol).entries
    if abs(psi.overlap(phi)) > tol:
        raise ValueError("states must be mutually orthogonal")
    if np.abs(u - u.conj().T).max() > tol:
        raise ValueError("relative unitary must be Hermitian within tol")
    cls, s = _superposition_entanglement(psi, phi, tol)
    if cls is Entanglement.PRODUCT:
        return Verdict(True, "superposition is a product state")
    return Verdict(False, f"superposition classified as {cls}", witness=s)


def _orthogonal_complement(state: StateVector) -> StateVector:
    a, b = state.amps
    return StateVector(phase_fix(np.array([-np.conj(b), np.conj(a)])))


def gamma_delta(psi_local: StateVector, phi_local: StateVector) -> tuple[StateVector, StateVector]:
    """Two maximally entangled states whose equal superposition is |psi, phi>.

    Gamma = (|psi,phi> + |psi_perp,phi_perp>)/sqrt(2) and
    Delta = (|psi,phi> - |psi_perp,phi_perp>)/sqrt(2), with the orthogonal
    complements fixed deterministically.
    """
    if psi_local.dim != 2 or phi_local.dim != 2:
        raise ValueError("inputs must be single-qubit states")
    product = np.kron(psi_local.amps, phi_local.amps)
    flipped = np.kron(_orthogonal_complement(psi_local).amps, _orthogonal_complement(phi_local).amps)
    gamma = StateVector((product + flipped) / _SQRT2)
    delta = StateVector((product - flipped) / _SQRT2)
    return gamma, delta


def _transform_raw(matrix: np.ndarray, state: StateVector) -> Optional[StateVector]:
    """Apply a possibly non-unitary matrix and renormalize; None if the state collapses."""
    out = matrix @ state.amps
    norm = np.linalg.norm(out)
    if norm < 1e-12:
        return None
    return StateVector(out / norm)


def schmidt_preservation_check(
    elem: MeronomicElement, state: StateVector, split: BipartiteSplit, tol: float = 1e-9
) -> Verdict:
    """Does the element keep the (sorted) Schmidt parameters of this state?"""
    before = schmidt_decompose(state, split).params
    transformed = _transform_raw(elem.to_operator().entries, state)
    if transformed is None:
        return Verdict(False, "element annihilated the probe state", witness=state.amps)
    after = schmidt_decompose(transformed, split).params
    drift = float(np.abs(before - after).max())
    if drift <= tol:
        return Verdict(True, f"Schmidt parameters preserved (max drift {drift:.2e})")
    return Verdict(False, f"Schmidt parameters drifted by {drift:.2e} > {tol}", witness=state.amps)


def member_recognition_check(elem: MeronomicElement, tol: float = 1e-8) -> Verdict:
    """Is a constructed group element recognized by the membership test?"""
    mat = elem.to_operator()
    expected = Membership.SWAP_LOCAL if elem.swap else Membership.LOCAL
    try:
        result = factor_as_local(mat, elem.split, tol)
    except ValueError as exc:
        return Verdict(False, f"membership test rejected the element: {exc}", witness=mat.entries)
    if result.verdict is expected and result.residual <= tol:
        return Verdict(True, f"recognized as {result.verdict.value} (residual {result.residual:.2e})")
    return Verdict(
        False,
        f"expected {expected.value}, got {result.verdict.value} with residual {result.residual:.2e}",
        witness=mat.entries,
    )


def nonmember_product_check(
    u: Operator, split: BipartiteSplit, rng: RngStream, probes: int = 20, tol: float = 1e-8
) -> Verdict:
    """A rejected unitary must send some product state to an entangled one."""
    for _ in range(probes):
        probe = random_product_state(split, rng)
        if classify(u.apply(probe), split, tol) is not Entanglement.PRODUCT:
            return Verdict(True, "found a product state mapped to an entangled state")
    return Verdict(False, f"all {probes} product probes stayed product", witness=u.entries)


def nonmember_maxent_check(u: Operator, rng: RngStream, probes: int = 20, tol: float = 1e-8) -> Verdict:
    """A rejected two-qubit unitary must break maximal entanglement somewhere."""
    split = BipartiteSplit(2, 2)
    for _ in range(probes):
        probe = random_maxent_state(2, rng)
        if classify(u.apply(probe), split, tol) is not Entanglement.MAXIMALLY_ENTANGLED:
            return Verdict(True, "found a maximally entangled state mapped off the maximal set")
    return Verdict(False, f"all {probes} maximally entangled probes stayed maximal", witness=u.entries)


def _trial_element(
    split: BipartiteSplit, index: int, rng: RngStream, elements: Optional[Sequence[MeronomicElement]]
) -> MeronomicElement:
    if elements:
        return elements[index % len(elements)]
    return random_m_element(split, rng)


def check_theorem1_suite(
    trials: int, rng: RngStream, elements: Optional[Sequence[MeronomicElement]] = None
) -> Verdict:
    """Sampled check that decomposition preservation, Schmidt preservation and
    product-form factorization single out the same unitaries.

    Per trial and split: a group element must preserve Schmidt parameters and
    be recognized by the membership test, while a Haar-random global unitary
    that the test rejects must move at least one product state off the
    product set.  `elements` overrides the sampled group elements (cycled,
    each trial running on that element's own split), which is how deliberate
    faults are injected.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    default_splits = (BipartiteSplit(2, 2), BipartiteSplit(2, 3))
    for t in range(trials):
        splits = (elements[t % len(elements)].split,) if elements else default_splits
        for split in splits:
            elem = _trial_element(split, t, rng, elements)
            probe = random_state(split.dim, rng)
            for verdict in (
                schmidt_preservation_check(elem, probe, split),
                member_recognition_check(elem),
            ):
                if not verdict.passed:
                    return Verdict(False, f"trial {t} on {split.d1}x{split.d2}: {verdict.detail}", verdict.witness)
            candidate = haar_unitary(split.dim, rng)
            if factor_as_local(candidate, split).verdict is Membership.NOT_MEMBER:
                verdict = nonmember_product_check(candidate, split, rng)
                if not verdict.passed:
                    return Verdict(False, f"trial {t} on {split.d1}x{split.d2}: {verdict.detail}", verdict.witness)
    return Verdict(True, f"{trials} trials on splits 2x2 and 2x3 passed")


def check_theorem2_suite(
    trials: int, rng: RngStream, elements: Optional[Sequence[MeronomicElement]] = None
) -> Verdict:
    """Sampled check that, on two qubits, exactly the decomposition-preserving
    unitaries preserve maximal entanglement.

    Group elements (or injected overrides) must map 20 random maximally
    entangled states to maximally entangled ones; rejected Haar unitaries
    must break maximality on at least one of 20 probes.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    split = BipartiteSplit(2, 2)
    if elements and any(e.split != split for e in elements):
        raise ValueError("the two-qubit suite only takes 2x2 elements")
    for t in range(trials):
        elem = _trial_element(split, t, rng, elements)
        mat = elem.to_operator().entries
        for _ in range(20):
            probe = random_maxent_state(2, rng)
            image = _transform_raw(mat, probe)
            if image is None or classify(image, split) is not Entanglement.MAXIMALLY_ENTANGLED:
                return Verdict(
                    False, f"trial {t}: element moved a maximally entangled state off the maximal set", probe.amps
                )
        candidate = haar_unitary(4, rng)
        if factor_as_local(candidate, split).verdict is Membership.NOT_MEMBER:
            verdict = nonmember_maxent_check(candidate, rng)
            if not verdict.passed:
                return Verdict(False, f"trial {t}: {verdict.detail}", verdict.witness)
    return Verdict(True, f"{trials} trials on the 2x2 split passed")


def _traceless_hermitian_unitary(rng: RngStream) -> np.ndarray:
    v = haar_unitary(2, rng).entries
    return v @ np.diag([1.0, -1.0]).astype(np.complex128) @ v.conj().T


def _apply_second(u: np.ndarray, state: StateVector) -> StateVector:
    return StateVector((state.amps.reshape(2, 2) @ u.T).reshape(-1))


def check_lemmas_suite(trials: int, rng: RngStream) -> Verdict:
    """Run both superposition lemmas on constructed and random instances.

    Per trial: an anti-Hermitian relative unitary (superposition must stay
    maximally entangled), a traceless Hermitian one (superposition must be a
    product state), and an unconstrained random pair (the biconditional must
    still hold, typically with both sides false).
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    for t in range(trials):
        base = random_maxent_state(2, rng)
        h = _traceless_hermitian_unitary(rng)
        cases = (
            ("anti-Hermitian construction", check_lemma_antihermitian(base, _apply_second(1j * h, base))),
            ("Hermitian construction", check_lemma_hermitian(base, _apply_second(h, base))),
            ("random pair", check_lemma_antihermitian(base, random_maxent_state(2, rng))),
        )
        for label, verdict in cases:
            if not verdict.passed:
                return Verdict(False, f"trial {t}, {label}: {verdict.detail}", verdict.witness)
    return Verdict(True, f"{trials} trials of both lemmas passed")
