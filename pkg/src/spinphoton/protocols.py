"""The four entanglement and state-transfer protocols.

Every protocol is deterministic: it enumerates all post-selection branches
with exact probabilities and canonical output states, never sampling.
Branch probabilities are absolute (they include reflection losses), so they
sum to the run's survival probability, which is 1 with the ideal gate.

Protocols that read the spin out via an ancilla photon report the joint
(detection, spin) outcome in the branch label, e.g. "+45/up", so that in
realistic mode the imperfect readout correlation can be attributed. With the
ideal gate the mismatched combinations carry exactly zero probability.

Waiting intervals enter only through optional pure dephasing of the stored
spin (``t_over_t2`` per interval); once dephasing is switched on the run is
carried through as a density matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .cavity import CavityParams
from .gates import (
    GateMode,
    IdealGate,
    RealisticGate,
    apply_correction,
    apply_gate,
    circular_to_z,
    hadamard,
    make_gate,
    ry,
    to_45,
    trion_emission_map,
)
from .metrics import concurrence
from .qstate import (
    DensityState,
    ProjectiveOutcome,
    PureState,
    QubitKind,
    QubitLabel,
    apply_unitary,
    dephase_spin,
    drop_qubit,
    fidelity,
    ket_state,
    measure,
    measurement_basis,
    normalize,
    photon,
    qubit_state,
    spin,
    tensor,
    tensor_all,
    to_density,
)

SQH = 1.0 / math.sqrt(2.0)

# Branches below this probability are numerical residue of exactly-forbidden
# outcomes; they are reported with zero states instead of renormalized noise.
PROBABILITY_FLOOR = 1e-24


@dataclass(frozen=True)
class ProtocolConfig:
    """Inputs shared by all protocols.

    ``alpha1/beta1`` describe photon 1 (or the unknown input qubit in the
    transfer schemes), ``alpha2/beta2`` photon 2 / spin 2. Each pair must be
    normalized. ``t_over_t2`` is the dephasing exponent applied to a stored
    spin per waiting interval.
    """

    gate: GateMode = IdealGate()
    alpha1: complex = SQH
    beta1: complex = SQH
    alpha2: complex = SQH
    beta2: complex = SQH
    t_over_t2: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name_a, name_b, a, b in (
            ("alpha1", "beta1", self.alpha1, self.beta1),
            ("alpha2", "beta2", self.alpha2, self.beta2),
        ):
            if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-9:
                raise ValueError(f"{name_a}/{name_b} are not normalized")
        if self.t_over_t2 < 0:
            raise ValueError("t_over_t2 must be nonnegative")


@dataclass(frozen=True)
class ProtocolBranch:
    """One post-selection branch with its quality metrics."""

    label: str
    probability: float
    state: PureState | DensityState
    target: PureState | None
    fidelity_vs_target: float
    concurrence: float | None
    success_probability: float


@dataclass(frozen=True)
class ProtocolResult:
    protocol: str
    branches: tuple[ProtocolBranch, ...]

    def survival_probability(self) -> float:
        return float(sum(b.probability for b in self.branches))

    def branch(self, label: str) -> ProtocolBranch:
        for b in self.branches:
            if b.label == label:
                return b
        raise KeyError(f"no branch labeled {label!r}")


def _require_pi_over_2(mode: GateMode) -> None:
    if isinstance(mode, IdealGate) and abs(mode.delta_phi - math.pi / 2) > 1e-12:
        raise ValueError("protocol requires a pi/2 conditional phase in ideal mode")


def _dephase_interval(state, spin_q: QubitLabel, t_over_t2: float):
    if t_over_t2 <= 0.0:
        return state
    if isinstance(state, PureState):
        state = to_density(state)
    return dephase_spin(state, spin_q, t_over_t2)


def _target_state(register, amplitudes) -> PureState | None:
    vec = np.asarray(amplitudes, dtype=np.complex128)
    nrm = np.linalg.norm(vec)
    if nrm < 1e-15:
        return None
    return PureState(tuple(register), vec / nrm)


# outcome label -> projection ket, per measurement basis
_KET_45 = dict(measurement_basis(QubitKind.PHOTON, "45"))
_KET_HV = dict(measurement_basis(QubitKind.PHOTON, "HV"))
_KET_UD = dict(measurement_basis(QubitKind.SPIN, "updown"))


def _drop_measured(state, measured):
    """Remove measured qubits, anchoring each drop on its known outcome ket
    (for density states this reduces to a partial trace)."""
    for q, ket in measured:
        if isinstance(state, PureState):
            state = drop_qubit(state, q, onto=ket)
        else:
            state = drop_qubit(state, q)
    return state


def _zero_like(kept, pure: bool):
    dim = 2 ** len(kept)
    if pure:
        return PureState(tuple(kept), np.zeros(dim, dtype=np.complex128), 0.0)
    return DensityState(tuple(kept), np.zeros((dim, dim), dtype=np.complex128), 0.0)


def _finish_branch(label, post, kept, target, measured=()) -> ProtocolBranch:
    """Package a measurement leaf: reduce to the kept register, score it."""
    prob = post.norm_tracking
    if prob <= PROBABILITY_FLOOR:
        out = _zero_like(kept, isinstance(post, PureState))
        prob = 0.0
        fid = math.nan
        conc = math.nan if len(kept) == 2 else None
    else:
        out = _drop_measured(post, measured)
        fid = fidelity(target, out) if target is not None else math.nan
        conc = concurrence(out) if len(kept) == 2 else None
    return ProtocolBranch(label, prob, out, target, fid, conc, prob)


# --- scheme A: photon pairs via remote entangled spins ----------------------

def scheme_a_entangle_spins(config: ProtocolConfig,
                            second_cavity: CavityParams | None = None) -> ProtocolResult:
    """Entangle two remote spins with one linearly polarized probe photon.

    The |H> probe reflects off cavity 1 then cavity 2 and is detected in the
    H/V basis. The V click heralds alpha1 alpha2 |up,up> - beta1 beta2
    |down,down>; the H click heralds alpha1 beta2 |up,down> + alpha2 beta1
    |down,up| (up to a global phase).
    """
    _require_pi_over_2(config.gate)
    s1, s2, probe = spin(1), spin(2), photon(0)
    mode2 = config.gate
    if second_cavity is not None:
        if not isinstance(config.gate, RealisticGate):
            raise ValueError("a second cavity needs a realistic gate configuration")
        mode2 = RealisticGate(second_cavity, config.gate.omega)

    state = tensor_all([
        qubit_state(s1, config.alpha1, config.beta1),
        qubit_state(s2, config.alpha2, config.beta2),
        ket_state(probe, "H"),
    ])
    state = apply_gate(state, make_gate(probe, s1, config.gate))
    state = apply_gate(state, make_gate(probe, s2, mode2))

    a1, b1, a2, b2 = config.alpha1, config.beta1, config.alpha2, config.beta2
    targets = {
        "V": _target_state((s1, s2), [a1 * a2, 0, 0, -b1 * b2]),
        "H": _target_state((s1, s2), [0, a1 * b2, a2 * b1, 0]),
    }
    kept = (s1, s2)
    branches = [_finish_branch(o.label, o.post_state, kept, targets[o.label],
                               measured=[(probe, _KET_HV[o.label])])
                for o in measure(state, probe, "HV")]
    return ProtocolResult("scheme-a-spins", tuple(branches))


def scheme_a_emit(entangled: ProtocolResult, config: ProtocolConfig) -> ProtocolResult:
    """Convert each heralded spin pair into a polarization-entangled photon pair.

    Optional dephasing (one emission interval per spin) is applied first, then
    the emission relabeling up -> L, down -> R on both spins.
    """
    s1, s2 = spin(1), spin(2)
    p1, p2 = photon(1), photon(2)
    a1, b1, a2, b2 = config.alpha1, config.beta1, config.alpha2, config.beta2
    targets = {
        "V": _target_state((p1, p2), [-b1 * b2, 0, 0, a1 * a2]),
        "H": _target_state((p1, p2), [0, a2 * b1, a1 * b2, 0]),
    }
    branches = []
    for br in entangled.branches:
        state = br.state
        if br.probability > 0.0 and config.t_over_t2 > 0.0:
            state = to_density(state)
            state = dephase_spin(state, s1, config.t_over_t2)
            state = dephase_spin(state, s2, config.t_over_t2)
        state = trion_emission_map(state, s1, p1)
        state = trion_emission_map(state, s2, p2)
        target = targets[br.label]
        if br.probability <= 0.0:
            fid = math.nan
            conc = math.nan
        else:
            fid = fidelity(target, state) if target is not None else math.nan
            conc = concurrence(state)
        branches.append(ProtocolBranch(br.label, br.probability, state, target,
                                       fid, conc, br.success_probability))
    return ProtocolResult("scheme-a", tuple(branches))


def scheme_a_photon_pairs(config: ProtocolConfig,
                          second_cavity: CavityParams | None = None) -> ProtocolResult:
    """Full scheme A: spin-spin entanglement followed by emission."""
    return scheme_a_emit(scheme_a_entangle_spins(config, second_cavity), config)


# --- scheme B: photon pairs via a single spin -------------------------------

def _emission_targets_b(config, p1, p2):
    a1, b1, a2, b2 = config.alpha1, config.beta1, config.alpha2, config.beta2
    return {
        "+45": _target_state((p1, p2), [a1 * a2, 0, 0, -b1 * b2]),
        "-45": _target_state((p1, p2), [0, a1 * b2, a2 * b1, 0]),
    }


def scheme_b_entangle_photons(config: ProtocolConfig) -> ProtocolResult:
    """Entangle two photons through successive reflections off one spin.

    Photons 1 and 2 reflect in sequence, a pi/2 spin pulse rotates the two
    interference branches onto |up>/|down>, and ancilla photon 3 (prepared
    |H>) reads the spin out through its Faraday-rotated polarization. A +45
    click projects onto the correlated pair alpha1 alpha2 |RR> - beta1 beta2
    |LL> with the spin in |up>; a -45 click onto alpha1 beta2 |RL> + alpha2
    beta1 |LR> with the spin in |down>. The spin is measured afterwards so the
    result carries the joint (photon-3, spin) distribution.
    """
    _require_pi_over_2(config.gate)
    p1, p2, p3, s = photon(1), photon(2), photon(3), spin(1)
    state = tensor_all([
        qubit_state(p1, config.alpha1, config.beta1),
        qubit_state(p2, config.alpha2, config.beta2),
        ket_state(p3, "H"),
        ket_state(s, "+x"),
    ])
    state = apply_gate(state, make_gate(p1, s, config.gate))
    state = _dephase_interval(state, s, config.t_over_t2)
    state = apply_gate(state, make_gate(p2, s, config.gate))
    state = _dephase_interval(state, s, config.t_over_t2)
    # pi/2 pulse: sends (up-down)/sqrt2 -> up, so the correlated-pair branch
    # reads out as spin-up / +45
    state = apply_unitary(state, [s], ry(math.pi / 2))
    state = apply_gate(state, make_gate(p3, s, config.gate))

    targets = _emission_targets_b(config, p1, p2)
    kept = (p1, p2)
    branches = []
    for o3 in measure(state, p3, "45"):
        if o3.post_state.norm_tracking <= PROBABILITY_FLOOR:
            for sl in ("up", "down"):
                branches.append(_finish_branch(f"{o3.label}/{sl}", o3.post_state,
                                               kept, targets[o3.label]))
            continue
        for os_ in measure(o3.post_state, s, "updown"):
            branches.append(_finish_branch(
                f"{o3.label}/{os_.label}", os_.post_state, kept, targets[o3.label],
                measured=[(p3, _KET_45[o3.label]), (s, _KET_UD[os_.label])]))
    return ProtocolResult("scheme-b", tuple(branches))


# --- scheme C: photon state onto the spin ------------------------------------

def transfer_photon_to_spin(config: ProtocolConfig) -> ProtocolResult:
    """Write an unknown photon polarization state onto the spin.

    The photon (alpha1|R> + beta1|L>) reflects once, the PBS projects it in
    the H/V basis, a pi/2 spin pulse maps the conditioned circular spin
    superpositions onto the poles, and a branch-dependent phase correction
    leaves alpha1|up> + beta1|down> in both branches.
    """
    _require_pi_over_2(config.gate)
    ph, s = photon(1), spin(1)
    state = tensor(qubit_state(ph, config.alpha1, config.beta1), ket_state(s, "+x"))
    state = apply_gate(state, make_gate(ph, s, config.gate))

    target = _target_state((s,), [config.alpha1, config.beta1])
    branches = []
    for o in measure(state, ph, "HV"):
        post = o.post_state
        if post.norm_tracking > PROBABILITY_FLOOR:
            post = apply_unitary(post, [s], circular_to_z())
            post = apply_correction(post, s, o.label, "C")
        branches.append(_finish_branch(o.label, post, (s,), target,
                                       measured=[(ph, _KET_HV[o.label])]))
    return ProtocolResult("transfer-ps", tuple(branches))


# --- scheme D: spin state onto a photon --------------------------------------

def transfer_spin_to_photon(config: ProtocolConfig) -> ProtocolResult:
    """Write an unknown spin state onto a fresh photon.

    Photon 1 (prepared |H>) reflects off the cavity holding the spin
    alpha1|up> + beta1|down>, a Hadamard pulse rotates the spin, and ancilla
    photon 3 performs the non-demolition spin readout. Wave-plate corrections
    keyed on the announced readout turn both branches into alpha1|H> +
    beta1|V>. Branch labels are "readout/actual" spin outcomes.
    """
    _require_pi_over_2(config.gate)
    p1, s, p3 = photon(1), spin(1), photon(3)
    state = tensor_all([
        ket_state(p1, "H"),
        qubit_state(s, config.alpha1, config.beta1),
        ket_state(p3, "H"),
    ])
    state = apply_gate(state, make_gate(p1, s, config.gate))
    state = _dephase_interval(state, s, config.t_over_t2)
    state = apply_unitary(state, [s], hadamard())
    state = apply_gate(state, make_gate(p3, s, config.gate))

    a, b = config.alpha1, config.beta1
    target = _target_state((p1,), [(a + b) * SQH, (a - b) * SQH])  # alpha|H> + beta|V>
    kept = (p1,)
    branches = []
    for o3 in measure(state, p3, "45"):
        announced = "up" if o3.label == "+45" else "down"
        if o3.post_state.norm_tracking <= PROBABILITY_FLOOR:
            for sl in ("up", "down"):
                branches.append(_finish_branch(f"{announced}/{sl}", o3.post_state,
                                               kept, target))
            continue
        for os_ in measure(o3.post_state, s, "updown"):
            post = os_.post_state
            if post.norm_tracking > PROBABILITY_FLOOR:
                post = apply_correction(post, p1, announced, "D")
            branches.append(_finish_branch(
                f"{announced}/{os_.label}", post, kept, target,
                measured=[(p3, _KET_45[o3.label]), (s, _KET_UD[os_.label])]))
    return ProtocolResult("transfer-sp", tuple(branches))


# --- non-demolition spin readout as a standalone operation -------------------

def gfr_spin_readout(state, spin_q: QubitLabel, ancilla_photon: QubitLabel,
                     gate: GateMode = IdealGate()) -> list[ProjectiveOutcome]:
    """Read a spin out with a fresh |H> ancilla photon; the spin survives.

    Returns both +-45 detection branches; with the ideal pi/2 gate the +45
    branch projects the spin onto |up> and the -45 branch onto |down>. The
    measured ancilla is removed from the returned post states.
    """
    _require_pi_over_2(gate)
    full = tensor(state, ket_state(ancilla_photon, "H"))
    full = apply_gate(full, make_gate(ancilla_photon, spin_q, gate))
    outcomes = []
    for o in measure(full, ancilla_photon, "45"):
        if o.post_state.norm_tracking > PROBABILITY_FLOOR:
            post = drop_qubit(o.post_state, ancilla_photon,
                              onto=_KET_45[o.label] if isinstance(
                                  o.post_state, PureState) else None)
        else:
            post = _zero_like(state.register, isinstance(state, PureState))
        outcomes.append(ProjectiveOutcome(o.label, o.probability, post))
    return outcomes


# --- multi-photon chaining ---------------------------------------------------

def chain_multiphoton(config: ProtocolConfig, n_photons: int) -> ProtocolResult:
    """Entangle ``n_photons`` photons against one spin (scheme B generalized).

    Photons 1 and 2 carry the configured amplitudes, photons 3..n enter as
    |H>. For n = 2 this is exactly scheme B. For n >= 3 the raw branch states
    are product states in the +-45 basis pair, so deterministic feed-forward
    wave plates (a +-45 -> R/L rotation on every photon plus one phase plate
    on photon 1) bring them to canonical form; with uniform inputs the +45
    branch is then (|R...R> - |L...L>)/sqrt2.
    """
    if not 2 <= n_photons <= 6:
        raise ValueError("register overflow: n_photons must be in [2, 6]")
    if n_photons == 2:
        res = scheme_b_entangle_photons(config)
        return ProtocolResult("ghz", res.branches)

    branches_raw = _chain_run(config, n_photons)
    if isinstance(config.gate, IdealGate) and config.t_over_t2 == 0.0:
        targets = {lbl.split("/")[0]: st for lbl, st, p in branches_raw if p > 0.0}
    else:
        ideal = _chain_run(replace(config, gate=IdealGate(), t_over_t2=0.0), n_photons)
        targets = {lbl.split("/")[0]: st for lbl, st, p in ideal if p > 0.0}
    targets = {k: normalize(v) if isinstance(v, PureState) else v
               for k, v in targets.items()}

    branches = []
    for lbl, st, p in branches_raw:
        det = lbl.split("/")[0]
        target = targets.get(det)
        if p <= 0.0:
            fid = math.nan
            conc = math.nan if st.n_qubits == 2 else None
        else:
            fid = fidelity(target, st) if target is not None else math.nan
            conc = concurrence(st) if st.n_qubits == 2 else None
        branches.append(ProtocolBranch(lbl, p, st, target, fid, conc, p))
    return ProtocolResult("ghz", tuple(branches))


def _chain_run(config: ProtocolConfig, n: int):
    """Run the chain circuit; returns (label, corrected kept state, probability)."""
    _require_pi_over_2(config.gate)
    photons = [photon(i) for i in range(1, n + 1)]
    ancilla = photon(n + 1)
    s = spin(1)
    pairs = {1: (config.alpha1, config.beta1), 2: (config.alpha2, config.beta2)}
    state = tensor_all(
        [qubit_state(p, *pairs.get(i + 1, (SQH, SQH))) for i, p in enumerate(photons)]
        + [ket_state(ancilla, "H"), ket_state(s, "+x")]
    )
    for i, p in enumerate(photons):
        if i:
            state = _dephase_interval(state, s, config.t_over_t2)
        state = apply_gate(state, make_gate(p, s, config.gate))
    state = _dephase_interval(state, s, config.t_over_t2)
    state = apply_unitary(state, [s], ry(math.pi / 2))
    state = apply_gate(state, make_gate(ancilla, s, config.gate))

    phase_fix = np.diag([1.0, (-1j) ** n]).astype(np.complex128)
    out = []
    for o3 in measure(state, ancilla, "45"):
        if o3.post_state.norm_tracking <= PROBABILITY_FLOOR:
            for sl in ("up", "down"):
                out.append((f"{o3.label}/{sl}", _zero_like(photons, True), 0.0))
            continue
        for os_ in measure(o3.post_state, s, "updown"):
            post = os_.post_state
            prob = post.norm_tracking
            if prob <= PROBABILITY_FLOOR:
                out.append((f"{o3.label}/{os_.label}",
                            _zero_like(photons, isinstance(post, PureState)), 0.0))
                continue
            for p in photons:
                post = apply_unitary(post, [p], to_45())
            post = apply_unitary(post, [photons[0]], phase_fix)
            post = _drop_measured(post, [(ancilla, _KET_45[o3.label]),
                                         (s, _KET_UD[os_.label])])
            out.append((f"{o3.label}/{os_.label}", post, prob))
    return out


# --- dispatch and branch merging ---------------------------------------------

PROTOCOL_NAMES = ("scheme-a", "scheme-b", "transfer-ps", "transfer-sp", "ghz")


def run_protocol(name: str, config: ProtocolConfig, n_photons: int = 3) -> ProtocolResult:
    if name == "scheme-a":
        return scheme_a_photon_pairs(config)
    if name == "scheme-b":
        return scheme_b_entangle_photons(config)
    if name == "transfer-ps":
        return transfer_photon_to_spin(config)
    if name == "transfer-sp":
        return transfer_spin_to_photon(config)
    if name == "ghz":
        return chain_multiphoton(config, n_photons)
    raise ValueError(f"unknown protocol {name!r} (valid: {', '.join(PROTOCOL_NAMES)})")


@dataclass(frozen=True)
class MergedBranch:
    probability: float
    state: PureState | DensityState | None
    fidelity_vs_target: float


def merged_detection_branch(result: ProtocolResult, detection: str) -> MergedBranch:
    """Combine all branches sharing a detection outcome (label prefix).

    A protocol heralded only on the photon detection delivers the mixture of
    the joint branches; this is the honest conditional state when the spin
    outcome is not used.
    """
    picked = [b for b in result.branches
              if b.label == detection or b.label.startswith(detection + "/")]
    if not picked:
        raise KeyError(f"no branch labeled {detection!r}")
    live = [b for b in picked if b.probability > 0.0]
    p_tot = sum(b.probability for b in live)
    if not live or p_tot <= 0.0:
        return MergedBranch(0.0, None, math.nan)
    target = next((b.target for b in live if b.target is not None), None)
    if len(live) == 1:
        st = live[0].state
        fid = fidelity(target, st) if target is not None else math.nan
        return MergedBranch(p_tot, st, fid)
    reg = live[0].state.register
    dim = 2 ** len(reg)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for b in live:
        rho = to_density(b.state) if isinstance(b.state, PureState) else b.state
        mat += (b.probability / p_tot) * (rho.matrix / max(rho.trace(), 1e-300))
    mixed = DensityState(reg, mat, min(p_tot, 1.0))
    fid = fidelity(target, mixed) if target is not None else math.nan
    return MergedBranch(p_tot, mixed, fid)
