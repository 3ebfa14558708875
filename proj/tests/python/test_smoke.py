"""Smoke tests for the wifiaudit Python bindings."""

import pytest

import wifiaudit as wa

AUTH_CHALLENGE = bytes.fromhex("5b5d7c7d7b3f2f3e3c2c602132262628")
PEER_CHALLENGE = bytes.fromhex("21402324255e262a28295f2b3a337c7e")


def test_pmk_vector():
    pmk = wa.derive_pmk("password", b"IEEE")
    assert pmk.hex() == "f42c6fc52df0ebef9ebb4b90b38a5f902e83fe1b135a70e23aed762e9710a12e"


def test_ptk_sub_keys_are_slices():
    pmk = wa.derive_pmk("password", b"IEEE")
    anonce = bytes.fromhex(
        "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f")
    snonce = bytes.fromhex(
        "1f1e1d1c1b1a191817161514131211100f0e0d0c0b0a09080706050403020100")
    keys = wa.derive_ptk(pmk, "00:11:22:33:44:55", "66:77:88:99:aa:bb", anonce, snonce)
    assert keys.ptk.hex() == (
        "21bfa9c5efff5213388faa1b90391b356ad107db5ab65e53ac431e5664b7d346"
        "7ff642769a8cd29e636cad4e5f57606843a0e288f43b6dfc2da434b39d8b03ea")
    assert keys.ptk == keys.kck + keys.kek + keys.tk


def test_mschapv2_vectors():
    assert wa.nt_hash("clientPass").hex() == "44ebba8d5312b8d611474411f56989ae"
    assert wa.mschapv2_challenge_hash(
        PEER_CHALLENGE, AUTH_CHALLENGE, b"User").hex() == "d02e4386bce91226"
    response = wa.mschapv2_response("clientPass", PEER_CHALLENGE, AUTH_CHALLENGE, b"User")
    assert response.hex() == "82309ecd8d708b5ea08faa3981cd83544233114a3d85d6df"


def test_generate_parse_crack_roundtrip():
    capture, pcap = wa.generate_handshake(
        "correcthorse", b"TestLab-5G", "02:11:22:33:44:55", "02:66:77:88:99:aa",
        seed=42, emit_all_four=True)
    assert capture.complete

    report = wa.parse_capture(pcap)
    assert report.frames_parsed == 5
    assert report.networks == [(b"TestLab-5G", "02:11:22:33:44:55")]
    assert len(report.handshakes) == 1
    assert report.handshakes[0] == capture

    assert wa.verify_psk_candidate(capture, "correcthorse")
    assert not wa.verify_psk_candidate(capture, "wrong-guess")

    result = wa.crack_psk(capture, ["wrong-guess-1", "tiny", "correcthorse"], workers=2)
    assert result.found
    assert result.candidate == "correcthorse"
    assert result.index == 2
    assert result.candidates_skipped == 1  # "tiny" is not a valid WPA passphrase

    missed = wa.crack_psk(capture, ["wrong-guess-1", "wrong-guess-2"])
    assert not missed.found
    assert missed.candidate is None
    assert missed.index is None


def test_fixture_roundtrip():
    capture, _ = wa.generate_handshake(
        "correcthorse", b"TestLab-5G", "02:11:22:33:44:55", "02:66:77:88:99:aa", seed=42)
    stored = wa.store_fixture(capture)
    loaded = wa.load_fixture(stored)
    assert loaded == capture
    assert wa.store_fixture(loaded) == stored


def test_ssid_override():
    capture, _ = wa.generate_handshake(
        "correcthorse", b"TestLab-5G", "02:11:22:33:44:55", "02:66:77:88:99:aa", seed=42)
    assert wa.verify_psk_candidate(capture, "correcthorse", ssid_override="TestLab-5G")
    assert not wa.verify_psk_candidate(capture, "correcthorse", ssid_override="OtherNet")


def test_evil_twin_partition_and_crack():
    clients = [
        wa.ClientProfile("phone-1", "alice", "Summer2024!", wa.TrustPolicy.ACCEPT_ANY),
        wa.ClientProfile("wary-2", "bob", "pw-bob", wa.TrustPolicy.PROMPT_ON_UNKNOWN_CERT),
        wa.ClientProfile("pinned-3", "erin", "pw-erin", wa.TrustPolicy.VALIDATE_PINNED_CERT,
                         pinned_cert_id="corp-legit-cert"),
    ]
    rogue = wa.RogueApConfig(b"CoffeeShop", "rogue-cert-01")
    log = wa.simulate_evil_twin(clients, rogue, seed=7)

    assert [c.client_name for c in log.captures] == ["phone-1"]
    assert [(r.client_name, r.reason) for r in log.refusals] == [
        ("wary-2", "prompt-declined"),
        ("pinned-3", "pin-mismatch"),
    ]
    assert len(log.captures) + len(log.refusals) == len(clients)

    cracked = wa.crack_mschapv2(log.captures[0], ["decoy-pw", "Summer2024!"])
    assert cracked.found
    assert cracked.candidate == "Summer2024!"

    stored = wa.store_evil_twin_log(log)
    loaded = wa.load_evil_twin_log(stored)
    assert wa.store_evil_twin_log(loaded) == stored


def test_errors_surface_as_valueerror():
    with pytest.raises(ValueError):
        wa.derive_pmk("short", b"IEEE")  # 7 characters
    with pytest.raises(ValueError):
        wa.parse_capture(b"definitely not a pcap")
    with pytest.raises(ValueError):
        wa.load_fixture("{}")
    capture, _ = wa.generate_handshake(
        "correcthorse", b"TestLab-5G", "02:11:22:33:44:55", "02:66:77:88:99:aa", seed=42)
    with pytest.raises(ValueError):
        wa.compute_mic(b"\x00" * 16, capture.mic_frame, descriptor_version=3)
