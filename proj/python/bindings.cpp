#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "wifiaudit/capture.hpp"
#include "wifiaudit/crack.hpp"
#include "wifiaudit/crypto.hpp"
#include "wifiaudit/errors.hpp"
#include "wifiaudit/simlab.hpp"

namespace py = pybind11;
using namespace wifiaudit;

namespace {

py::bytes to_py_bytes(std::span<const std::uint8_t> data) {
    return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

Bytes to_bytes(const std::string& text) {
    return Bytes(text.begin(), text.end());
}

template <std::size_t N>
std::array<std::uint8_t, N> to_array(const std::string& raw, const char* what) {
    if (raw.size() != N) {
        throw ValidationError(std::string(what) + " must be " + std::to_string(N) +
                              " bytes (got " + std::to_string(raw.size()) + ")");
    }
    std::array<std::uint8_t, N> out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

Dictionary make_dictionary(const std::vector<std::string>& words) {
    Dictionary dict;
    dict.candidates = words;
    dict.source = "<python list>";
    return dict;
}

CrackOptions make_options(unsigned workers, const std::optional<std::string>& ssid_override) {
    CrackOptions options;
    options.worker_count = workers;
    if (ssid_override) {
        options.ssid_override = to_bytes(*ssid_override);
    }
    return options;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Offline Wi-Fi security audit toolkit: WPA2-PSK handshake cracking, "
              "MSCHAPv2 credential capture simulation, and capture ingestion.";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    // ---- crypto ----

    py::class_<SessionKeys>(m, "SessionKeys")
        .def_property_readonly("pmk", [](const SessionKeys& k) { return to_py_bytes(k.pmk); })
        .def_property_readonly("ptk", [](const SessionKeys& k) { return to_py_bytes(k.ptk); })
        .def_property_readonly("kck", [](const SessionKeys& k) { return to_py_bytes(k.kck()); })
        .def_property_readonly("kek", [](const SessionKeys& k) { return to_py_bytes(k.kek()); })
        .def_property_readonly("tk", [](const SessionKeys& k) { return to_py_bytes(k.tk()); });

    m.def("derive_pmk",
          [](const std::string& passphrase, const std::string& ssid) {
              return to_py_bytes(derive_pmk(Passphrase(passphrase), to_bytes(ssid)));
          },
          py::arg("passphrase"), py::arg("ssid"),
          "PMK = PBKDF2-HMAC-SHA1(passphrase, ssid, 4096, 32) per IEEE 802.11i.");

    m.def("derive_ptk",
          [](const std::string& pmk, const std::string& aa, const std::string& spa,
             const std::string& anonce, const std::string& snonce) {
              return derive_ptk(to_array<kPmkSize>(pmk, "pmk"), MacAddress::parse(aa),
                                MacAddress::parse(spa), to_array<kNonceSize>(anonce, "anonce"),
                                to_array<kNonceSize>(snonce, "snonce"));
          },
          py::arg("pmk"), py::arg("aa"), py::arg("spa"), py::arg("anonce"), py::arg("snonce"),
          "Expands the PMK into SessionKeys per IEEE 802.11i PRF-512.");

    m.def("compute_mic",
          [](const std::string& kck, const std::string& frame, int descriptor_version) {
              return to_py_bytes(compute_mic(to_bytes(kck), to_bytes(frame), descriptor_version));
          },
          py::arg("kck"), py::arg("eapol_frame"), py::arg("descriptor_version") = 2,
          "EAPOL-Key MIC over a frame whose MIC field is zeroed (v1 HMAC-MD5, v2 HMAC-SHA1).");

    m.def("nt_hash",
          [](const std::string& password) { return to_py_bytes(nt_hash(password).bytes); },
          py::arg("password"), "MD4 over the UTF-16LE encoding of the password (RFC 2759).");

    m.def("mschapv2_challenge_hash",
          [](const std::string& peer, const std::string& auth, const std::string& username) {
              return to_py_bytes(mschapv2_challenge_hash(to_array<16>(peer, "peer_challenge"),
                                                      to_array<16>(auth, "auth_challenge"),
                                                      to_bytes(username)));
          },
          py::arg("peer_challenge"), py::arg("auth_challenge"), py::arg("username"));

    m.def("mschapv2_response",
          [](const std::string& password, const std::string& peer, const std::string& auth,
             const std::string& username) {
              return to_py_bytes(mschapv2_response(password, to_array<16>(peer, "peer_challenge"),
                                                to_array<16>(auth, "auth_challenge"),
                                                to_bytes(username)));
          },
          py::arg("password"), py::arg("peer_challenge"), py::arg("auth_challenge"),
          py::arg("username"), "24-byte NT-Response per RFC 2759.");

    // ---- capture ----

    py::class_<HandshakeCapture>(m, "HandshakeCapture")
        .def_property_readonly("ssid",
                               [](const HandshakeCapture& h) { return to_py_bytes(h.ssid); })
        .def_property_readonly("ap_mac",
                               [](const HandshakeCapture& h) { return h.ap_mac.str(); })
        .def_property_readonly("client_mac",
                               [](const HandshakeCapture& h) { return h.client_mac.str(); })
        .def_property_readonly("anonce",
                               [](const HandshakeCapture& h) { return to_py_bytes(h.anonce); })
        .def_property_readonly("snonce",
                               [](const HandshakeCapture& h) { return to_py_bytes(h.snonce); })
        .def_property_readonly("mic", [](const HandshakeCapture& h) { return to_py_bytes(h.mic); })
        .def_property_readonly("mic_frame",
                               [](const HandshakeCapture& h) { return to_py_bytes(h.mic_frame); })
        .def_readonly("descriptor_version", &HandshakeCapture::descriptor_version)
        .def_readonly("complete", &HandshakeCapture::complete)
        .def("__eq__", [](const HandshakeCapture& a, const HandshakeCapture& b) { return a == b; });

    py::class_<CaptureReport>(m, "CaptureReport")
        .def_property_readonly("networks",
                               [](const CaptureReport& r) {
                                   py::list out;
                                   for (const auto& [ssid, mac] : r.networks_seen) {
                                       out.append(py::make_tuple(to_py_bytes(ssid), mac.str()));
                                   }
                                   return out;
                               })
        .def_readonly("handshakes", &CaptureReport::handshakes)
        .def_readonly("incomplete", &CaptureReport::incomplete)
        .def_readonly("frames_parsed", &CaptureReport::frames_parsed)
        .def_readonly("frames_skipped", &CaptureReport::frames_skipped);

    m.def("parse_capture",
          [](const std::string& data) { return parse_capture(to_bytes(data)); },
          py::arg("data"), "Parses a classic pcap capture (link type 105 or 127).");

    m.def("load_fixture",
          [](const std::string& text) { return load_fixture(std::string_view(text)); },
          py::arg("document"), "Loads a canonical handshake fixture JSON document.");

    m.def("store_fixture",
          [](const HandshakeCapture& handshake) { return to_py_bytes(store_fixture(handshake)); },
          py::arg("handshake"), "Serializes a handshake to the canonical fixture JSON.");

    // ---- crack ----

    py::class_<CrackResult>(m, "CrackResult")
        .def_property_readonly("found",
                               [](const CrackResult& r) { return r.match.has_value(); })
        .def_property_readonly("candidate",
                               [](const CrackResult& r) -> py::object {
                                   if (!r.match) return py::none();
                                   return py::str(r.match->candidate);
                               })
        .def_property_readonly("index",
                               [](const CrackResult& r) -> py::object {
                                   if (!r.match) return py::none();
                                   return py::int_(r.match->index);
                               })
        .def_readonly("candidates_tested", &CrackResult::candidates_tested)
        .def_readonly("candidates_skipped", &CrackResult::candidates_skipped)
        .def_readonly("elapsed_seconds", &CrackResult::elapsed_seconds)
        .def_readonly("throughput", &CrackResult::throughput);

    m.def("verify_psk_candidate",
          [](const HandshakeCapture& handshake, const std::string& candidate,
             const std::optional<std::string>& ssid_override) {
              std::optional<Bytes> override_bytes;
              if (ssid_override) override_bytes = to_bytes(*ssid_override);
              return verify_psk_candidate(handshake, Passphrase(candidate),
                                          override_bytes ? &*override_bytes : nullptr);
          },
          py::arg("handshake"), py::arg("candidate"), py::arg("ssid_override") = py::none(),
          "Full chain: derive PMK and PTK, recompute the MIC, compare.");

    m.def("crack_psk",
          [](const HandshakeCapture& handshake, const std::vector<std::string>& words,
             unsigned workers, const std::optional<std::string>& ssid_override) {
              return crack_psk(handshake, make_dictionary(words),
                               make_options(workers, ssid_override));
          },
          py::arg("handshake"), py::arg("words"), py::arg("workers") = 1,
          py::arg("ssid_override") = py::none(),
          "Dictionary attack; returns the smallest matching index regardless of workers.");

    // ---- sim lab ----

    py::enum_<TrustPolicy>(m, "TrustPolicy")
        .value("PROMPT_ON_UNKNOWN_CERT", TrustPolicy::PromptOnUnknownCert)
        .value("VALIDATE_PINNED_CERT", TrustPolicy::ValidatePinnedCert)
        .value("ACCEPT_ANY", TrustPolicy::AcceptAny);

    py::class_<ClientProfile>(m, "ClientProfile")
        .def(py::init([](const std::string& name, const std::string& username,
                         const std::string& password, TrustPolicy trust_policy,
                         const std::optional<std::string>& pinned_cert_id) {
                 ClientProfile client;
                 client.name = name;
                 client.username = username;
                 client.password = password;
                 client.trust_policy = trust_policy;
                 client.pinned_cert_id = pinned_cert_id;
                 return client;
             }),
             py::arg("name"), py::arg("username"), py::arg("password"),
             py::arg("trust_policy") = TrustPolicy::PromptOnUnknownCert,
             py::arg("pinned_cert_id") = py::none())
        .def_readonly("name", &ClientProfile::name)
        .def_readonly("username", &ClientProfile::username)
        .def_readonly("password", &ClientProfile::password)
        .def_readonly("trust_policy", &ClientProfile::trust_policy)
        .def_readonly("pinned_cert_id", &ClientProfile::pinned_cert_id);

    py::class_<RogueApConfig>(m, "RogueApConfig")
        .def(py::init([](const std::string& ssid, const std::string& cert_id,
                         std::uint64_t auth_challenge_seed) {
                 RogueApConfig rogue;
                 rogue.ssid = to_bytes(ssid);
                 rogue.cert_id = cert_id;
                 rogue.auth_challenge_seed = auth_challenge_seed;
                 return rogue;
             }),
             py::arg("ssid"), py::arg("cert_id"), py::arg("auth_challenge_seed") = 0)
        .def_property_readonly("ssid",
                               [](const RogueApConfig& r) { return to_py_bytes(r.ssid); })
        .def_readonly("cert_id", &RogueApConfig::cert_id)
        .def_readonly("auth_challenge_seed", &RogueApConfig::auth_challenge_seed);

    py::class_<MsChapV2Capture>(m, "MsChapV2Capture")
        .def(py::init([](const std::string& username, const std::string& auth_challenge,
                         const std::string& peer_challenge, const std::string& response,
                         const std::string& client_name) {
                 MsChapV2Capture capture;
                 capture.username = to_bytes(username);
                 capture.auth_challenge = to_array<16>(auth_challenge, "auth_challenge");
                 capture.peer_challenge = to_array<16>(peer_challenge, "peer_challenge");
                 capture.response = to_array<24>(response, "response");
                 capture.client_name = client_name;
                 return capture;
             }),
             py::arg("username"), py::arg("auth_challenge"), py::arg("peer_challenge"),
             py::arg("response"), py::arg("client_name") = "")
        .def_property_readonly("username",
                               [](const MsChapV2Capture& c) { return to_py_bytes(c.username); })
        .def_property_readonly("auth_challenge",
                               [](const MsChapV2Capture& c) { return to_py_bytes(c.auth_challenge); })
        .def_property_readonly("peer_challenge",
                               [](const MsChapV2Capture& c) { return to_py_bytes(c.peer_challenge); })
        .def_property_readonly("response",
                               [](const MsChapV2Capture& c) { return to_py_bytes(c.response); })
        .def_readonly("client_name", &MsChapV2Capture::client_name);

    m.def("crack_mschapv2",
          [](const MsChapV2Capture& capture, const std::vector<std::string>& words,
             unsigned workers) {
              return crack_mschapv2(capture, make_dictionary(words),
                                    make_options(workers, std::nullopt));
          },
          py::arg("capture"), py::arg("words"), py::arg("workers") = 1);

    py::class_<Refusal>(m, "Refusal")
        .def_readonly("client_name", &Refusal::client_name)
        .def_property_readonly("reason",
                               [](const Refusal& r) { return to_string(r.reason); });

    py::class_<SimEvent>(m, "SimEvent")
        .def_readonly("client_name", &SimEvent::client_name)
        .def_readonly("event", &SimEvent::event)
        .def_readonly("detail", &SimEvent::detail);

    py::class_<EvilTwinLog>(m, "EvilTwinLog")
        .def_readonly("captures", &EvilTwinLog::captures)
        .def_readonly("refusals", &EvilTwinLog::refusals)
        .def_readonly("event_trace", &EvilTwinLog::event_trace);

    m.def("simulate_evil_twin",
          [](const std::vector<ClientProfile>& clients, const RogueApConfig& rogue,
             std::uint64_t seed) { return simulate_evil_twin(clients, rogue, seed); },
          py::arg("clients"), py::arg("rogue"), py::arg("seed"),
          "Walks each client through the rogue AP; captures MSCHAPv2 tuples from the ones "
          "that accept the certificate.");

    m.def("generate_handshake",
          [](const std::string& passphrase, const std::string& ssid, const std::string& ap_mac,
             const std::string& client_mac, std::uint64_t seed, int descriptor_version,
             bool emit_all_four, const std::optional<std::string>& anonce,
             const std::optional<std::string>& snonce) {
              HandshakeSpec spec{Passphrase(passphrase),
                                 to_bytes(ssid),
                                 MacAddress::parse(ap_mac),
                                 MacAddress::parse(client_mac),
                                 std::nullopt,
                                 std::nullopt,
                                 descriptor_version,
                                 emit_all_four};
              if (anonce) spec.anonce = to_array<kNonceSize>(*anonce, "anonce");
              if (snonce) spec.snonce = to_array<kNonceSize>(*snonce, "snonce");
              GeneratedHandshake generated = generate_handshake(spec, seed);
              return py::make_tuple(generated.capture, to_py_bytes(generated.pcap_bytes));
          },
          py::arg("passphrase"), py::arg("ssid"), py::arg("ap_mac"), py::arg("client_mac"),
          py::arg("seed"), py::arg("descriptor_version") = 2, py::arg("emit_all_four") = false,
          py::arg("anonce") = py::none(), py::arg("snonce") = py::none(),
          "Forges a beacon plus 4-way exchange; returns (HandshakeCapture, pcap bytes).");

    m.def("store_evil_twin_log",
          [](const EvilTwinLog& log) { return to_py_bytes(store_evil_twin_log(log)); },
          py::arg("log"));

    m.def("load_evil_twin_log",
          [](const std::string& text) { return load_evil_twin_log(text); },
          py::arg("document"));
}
