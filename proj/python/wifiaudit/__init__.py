"""Offline Wi-Fi security audit toolkit.

WPA2-PSK dictionary attacks against captured 4-way handshakes, MSCHAPv2
credential capture simulation with hash cracking, and pcap ingestion —
all backed by the C++ core in :mod:`wifiaudit._core`.
"""

from ._core import (
    CaptureReport,
    ClientProfile,
    ConfigError,
    CrackResult,
    EvilTwinLog,
    FormatError,
    HandshakeCapture,
    MsChapV2Capture,
    Refusal,
    RogueApConfig,
    SessionKeys,
    SimEvent,
    TrustPolicy,
    ValidationError,
    compute_mic,
    crack_mschapv2,
    crack_psk,
    derive_pmk,
    derive_ptk,
    generate_handshake,
    load_evil_twin_log,
    load_fixture,
    mschapv2_challenge_hash,
    mschapv2_response,
    nt_hash,
    parse_capture,
    simulate_evil_twin,
    store_evil_twin_log,
    store_fixture,
    verify_psk_candidate,
)

__all__ = [
    "CaptureReport",
    "ClientProfile",
    "ConfigError",
    "CrackResult",
    "EvilTwinLog",
    "FormatError",
    "HandshakeCapture",
    "MsChapV2Capture",
    "Refusal",
    "RogueApConfig",
    "SessionKeys",
    "SimEvent",
    "TrustPolicy",
    "ValidationError",
    "compute_mic",
    "crack_mschapv2",
    "crack_psk",
    "derive_pmk",
    "derive_ptk",
    "generate_handshake",
    "load_evil_twin_log",
    "load_fixture",
    "mschapv2_challenge_hash",
    "mschapv2_response",
    "nt_hash",
    "parse_capture",
    "simulate_evil_twin",
    "store_evil_twin_log",
    "store_fixture",
    "verify_psk_candidate",
]

__version__ = "0.1.0"
