"""Schedules of Ising evolutions (encodings with durations) that realize a
target global ZZ coupling on hardware with fixed pairwise couplings."""

__version__ = "0.1.0"

from .constructions import (
    BlockSpec,
    compose_hadamard,
    compose_sum,
    compose_tensor,
    exclude_qubits,
    synth_blocks,
    synth_nn_pairs,
    synth_subdiagonal,
    twisted_worst_case,
    worst_case_dual,
    worst_case_primal,
)
from .exact import DualCertificate, SynthesisResult, membership, synth_exact
from .heuristic import build_restricted, spanning_check, synth_restricted
from .matrixcore import CouplingMatrix, Encoding, Schedule, quotient, unvectorize, vectorize
from .verify import check, phase_vector, reconstruct

__all__ = [
    "BlockSpec",
    "CouplingMatrix",
    "DualCertificate",
    "Encoding",
    "Schedule",
    "SynthesisResult",
    "build_restricted",
    "check",
    "compose_hadamard",
    "compose_sum",
    "compose_tensor",
    "exclude_qubits",
    "membership",
    "phase_vector",
    "quotient",
    "reconstruct",
    "spanning_check",
    "synth_blocks",
    "synth_exact",
    "synth_nn_pairs",
    "synth_restricted",
    "synth_subdiagonal",
    "twisted_worst_case",
    "unvectorize",
    "vectorize",
    "worst_case_dual",
    "worst_case_primal",
]
