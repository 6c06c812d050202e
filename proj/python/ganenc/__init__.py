"""Keystream cipher keyed through a hidden logic-gate circuit."""

from ganenc._core import (
    BitVector,
    Circuit,
    ConvergenceError,
    GanencError,
    TagMismatchError,
    bench,
    classify_password,
    decrypt,
    encrypt,
    envelope_info,
    generate_password,
    lock_circuit,
    random_circuit,
    shred,
    unlock_circuit,
    validate_password,
)

__all__ = [
    "BitVector",
    "Circuit",
    "ConvergenceError",
    "GanencError",
    "TagMismatchError",
    "bench",
    "classify_password",
    "decrypt",
    "encrypt",
    "envelope_info",
    "generate_password",
    "lock_circuit",
    "random_circuit",
    "shred",
    "unlock_circuit",
    "validate_password",
]
