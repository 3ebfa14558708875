// wifi-audit: offline Wi-Fi security audit toolkit.
//
// Subcommands: inspect, crack-psk, crack-mschapv2, gen-handshake, evil-twin.
// Exit codes: 0 = success / match found, 1 = no handshake / dictionary
// exhausted / no capture harvested, 2 = usage or input error.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wifiaudit/capture.hpp"
#include "wifiaudit/crack.hpp"
#include "wifiaudit/crypto.hpp"
#include "wifiaudit/errors.hpp"
#include "wifiaudit/simlab.hpp"

namespace {

using namespace wifiaudit;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitFound = 0;
constexpr int kExitNotFound = 1;
constexpr int kExitError = 2;

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open file: " + path);
    }
    return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot open file for writing: " + path);
    }
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) {
        throw ConfigError("failed to write file: " + path);
    }
}

std::string ssid_display(const Bytes& ssid) {
    bool printable = !ssid.empty() && std::all_of(ssid.begin(), ssid.end(), [](std::uint8_t b) {
        return b >= 0x20 && b < 0x7f;
    });
    if (printable) {
        return std::string(ssid.begin(), ssid.end());
    }
    return ssid.empty() ? std::string("(unknown)") : "0x" + to_hex(ssid);
}

void print_json(const ordered_json& doc) {
    std::cout << doc.dump(2) << '\n';
}

std::array<std::uint8_t, 16> hex16(const std::string& text, const char* what) {
    Bytes raw = from_hex(text);
    if (raw.size() != 16) {
        throw ValidationError(std::string(what) + " must be 16 hex-encoded bytes (got " +
                              std::to_string(raw.size()) + ")");
    }
    std::array<std::uint8_t, 16> out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

/// Either a pcap capture or a JSON fixture, sniffed by the leading byte.
std::vector<HandshakeCapture> load_handshakes(const Bytes& content) {
    auto first_printable = std::find_if(content.begin(), content.end(), [](std::uint8_t b) {
        return b != ' ' && b != '\t' && b != '\r' && b != '\n';
    });
    if (first_printable != content.end() && *first_printable == '{') {
        return {load_fixture(std::span(content))};
    }
    return parse_capture(content).handshakes;
}

struct CrackRenderOptions {
    bool json = false;
};

int render_crack_result(const CrackResult& result, const CrackRenderOptions& render) {
    if (render.json) {
        ordered_json doc;
        doc["outcome"] = result.match ? "found" : "exhausted";
        doc["candidate"] = result.match ? ordered_json(result.match->candidate)
                                        : ordered_json(nullptr);
        doc["index"] = result.match ? ordered_json(result.match->index) : ordered_json(nullptr);
        doc["candidates_tested"] = result.candidates_tested;
        doc["candidates_skipped"] = result.candidates_skipped;
        doc["elapsed_seconds"] = result.elapsed_seconds;
        doc["throughput"] = result.throughput;
        print_json(doc);
    } else {
        if (result.match) {
            std::cout << "found: " << result.match->candidate << " (index "
                      << result.match->index << ")\n";
        } else {
            std::cout << "exhausted: no matching candidate\n";
        }
        std::cout << "tested " << result.candidates_tested << " candidates (skipped "
                  << result.candidates_skipped << ") in " << std::fixed << std::setprecision(2)
                  << result.elapsed_seconds << " s (" << std::setprecision(1)
                  << result.throughput << "/s)\n";
    }
    return result.match ? kExitFound : kExitNotFound;
}

/// Worker count: an explicit --workers wins; otherwise WIFI_AUDIT_WORKERS is
/// honored when set, and a set-but-invalid value is a hard usage error.
unsigned resolve_workers(bool flag_given, unsigned flag_value) {
    if (flag_given) {
        return flag_value;
    }
    const char* env = std::getenv("WIFI_AUDIT_WORKERS");
    if (env == nullptr || *env == '\0') {
        return flag_value;
    }
    unsigned value = 0;
    auto [end, ec] = std::from_chars(env, env + std::strlen(env), value);
    if (ec != std::errc() || *end != '\0' || value < 1 || value > 256) {
        throw ConfigError("WIFI_AUDIT_WORKERS must be an integer in 1..256 (got \"" +
                          std::string(env) + "\")");
    }
    return value;
}

void attach_progress(CrackOptions& options) {
    options.on_progress = [](const CrackProgress& progress) {
        std::cerr << "progress: " << progress.tested << "/" << progress.total
                  << " candidates, " << std::fixed << std::setprecision(1) << progress.rate
                  << "/s\n";
    };
}

int cmd_inspect(const std::string& capture_path, bool json) {
    CaptureReport report = parse_capture(read_file(capture_path));
    if (json) {
        ordered_json doc;
        doc["networks"] = ordered_json::array();
        for (const auto& [ssid, mac] : report.networks_seen) {
            ordered_json entry;
            entry["ssid"] = ssid_display(ssid);
            entry["ap_mac"] = mac.str();
            doc["networks"].push_back(std::move(entry));
        }
        doc["handshakes"] = ordered_json::array();
        for (const auto& handshake : report.handshakes) {
            ordered_json entry;
            entry["ap_mac"] = handshake.ap_mac.str();
            entry["client_mac"] = handshake.client_mac.str();
            entry["ssid"] = ssid_display(handshake.ssid);
            entry["descriptor_version"] = handshake.descriptor_version;
            entry["complete"] = handshake.complete;
            doc["handshakes"].push_back(std::move(entry));
        }
        doc["incomplete"] = report.incomplete;
        doc["frames_parsed"] = report.frames_parsed;
        doc["frames_skipped"] = report.frames_skipped;
        print_json(doc);
    } else {
        std::cout << "networks: " << report.networks_seen.size() << '\n';
        for (const auto& [ssid, mac] : report.networks_seen) {
            std::cout << "  " << ssid_display(ssid) << "  " << mac.str() << '\n';
        }
        std::cout << "handshakes: " << report.handshakes.size() << '\n';
        for (const auto& handshake : report.handshakes) {
            std::cout << "  ap " << handshake.ap_mac.str() << "  client "
                      << handshake.client_mac.str() << "  ssid " << ssid_display(handshake.ssid)
                      << "  eapol v" << handshake.descriptor_version
                      << (handshake.complete ? "  complete" : "  partial") << '\n';
        }
        std::cout << "incomplete pairs: " << report.incomplete << '\n';
        std::cout << "frames parsed: " << report.frames_parsed << '\n';
        std::cout << "frames skipped: " << report.frames_skipped << '\n';
    }
    return report.handshakes.empty() ? kExitNotFound : kExitFound;
}

struct CrackPskArgs {
    std::string capture_path;
    std::string wordlist;
    std::string ssid;
    std::string bssid;
    unsigned workers = 1;
    double progress_interval = 5.0;
    bool json = false;
};

int cmd_crack_psk(const CrackPskArgs& args) {
    std::vector<HandshakeCapture> handshakes = load_handshakes(read_file(args.capture_path));
    if (!args.bssid.empty()) {
        MacAddress wanted = MacAddress::parse(args.bssid);
        std::erase_if(handshakes,
                      [&](const HandshakeCapture& h) { return !(h.ap_mac == wanted); });
    }
    if (handshakes.empty()) {
        std::cerr << "error: no usable handshake in " << args.capture_path
                  << (args.bssid.empty() ? "" : " for bssid " + args.bssid) << '\n';
        return kExitError;
    }
    if (handshakes.size() > 1) {
        std::cerr << "error: " << handshakes.size()
                  << " handshakes found; select one with --bssid:\n";
        for (const auto& handshake : handshakes) {
            std::cerr << "  " << handshake.ap_mac.str() << "  client "
                      << handshake.client_mac.str() << "  ssid "
                      << ssid_display(handshake.ssid) << '\n';
        }
        return kExitError;
    }

    Dictionary dictionary = Dictionary::from_file(args.wordlist);
    CrackOptions options;
    options.worker_count = args.workers;
    options.progress_interval = args.progress_interval;
    if (!args.ssid.empty()) {
        options.ssid_override = Bytes(args.ssid.begin(), args.ssid.end());
    }
    attach_progress(options);
    CrackResult result = crack_psk(handshakes.front(), dictionary, options);
    return render_crack_result(result, {args.json});
}

struct CrackMsChapArgs {
    std::string capture_path;
    std::string username;
    std::string auth_challenge;
    std::string peer_challenge;
    std::string response;
    std::string client;
    std::string wordlist;
    unsigned workers = 1;
    double progress_interval = 5.0;
    bool json = false;
};

MsChapV2Capture select_capture(const CrackMsChapArgs& args) {
    bool have_file = !args.capture_path.empty();
    bool have_flags = !args.username.empty() || !args.auth_challenge.empty() ||
                      !args.peer_challenge.empty() || !args.response.empty();
    if (have_file == have_flags) {
        throw ConfigError("provide either --capture or the full "
                          "--username/--auth-challenge/--peer-challenge/--response flag set");
    }
    std::vector<MsChapV2Capture> captures;
    if (have_file) {
        Bytes content = read_file(args.capture_path);
        std::string text(content.begin(), content.end());
        ordered_json doc;
        try {
            doc = ordered_json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("capture file is not valid JSON: " + std::string(e.what()));
        }
        if (doc.is_object() && doc.contains("captures")) {
            EvilTwinLog log = load_evil_twin_log(text);
            captures = std::move(log.captures);
        } else {
            captures.push_back(load_mschapv2_capture(text));
        }
    } else {
        if (args.username.empty() || args.auth_challenge.empty() ||
            args.peer_challenge.empty() || args.response.empty()) {
            throw ConfigError("the flag form requires all of --username, --auth-challenge, "
                              "--peer-challenge, and --response");
        }
        MsChapV2Capture capture;
        capture.username = Bytes(args.username.begin(), args.username.end());
        capture.auth_challenge = hex16(args.auth_challenge, "--auth-challenge");
        capture.peer_challenge = hex16(args.peer_challenge, "--peer-challenge");
        Bytes raw = from_hex(args.response);
        if (raw.size() != 24) {
            throw ValidationError("--response must be 24 hex-encoded bytes (got " +
                                  std::to_string(raw.size()) + ")");
        }
        std::copy(raw.begin(), raw.end(), capture.response.begin());
        captures.push_back(std::move(capture));
    }

    if (!args.client.empty()) {
        std::erase_if(captures, [&](const MsChapV2Capture& capture) {
            return capture.client_name != args.client;
        });
        if (captures.empty()) {
            throw ConfigError("no capture for client \"" + args.client + "\"");
        }
    }
    if (captures.size() > 1) {
        std::string names;
        for (const auto& capture : captures) {
            names += names.empty() ? "" : ", ";
            names += capture.client_name;
        }
        throw ConfigError("log holds " + std::to_string(captures.size()) +
                          " captures; select one with --client (" + names + ")");
    }
    return captures.front();
}

int cmd_crack_mschapv2(const CrackMsChapArgs& args) {
    MsChapV2Capture capture = select_capture(args);
    Dictionary dictionary = Dictionary::from_file(args.wordlist);
    CrackOptions options;
    options.worker_count = args.workers;
    options.progress_interval = args.progress_interval;
    attach_progress(options);
    CrackResult result = crack_mschapv2(capture, dictionary, options);
    return render_crack_result(result, {args.json});
}

struct GenHandshakeArgs {
    std::string passphrase;
    std::string ssid;
    std::uint64_t seed = 0;
    std::string out;
    std::string fixture;
    std::string ap_mac;
    std::string client_mac;
    std::string anonce;
    std::string snonce;
    int descriptor_version = 2;
    bool all_four = false;
    bool json = false;
};

MacAddress derived_mac(std::uint64_t seed, const std::string& label) {
    DeterministicStream stream(seed, label);
    MacAddress mac;
    stream.fill(mac.octets);
    mac.octets[0] = static_cast<std::uint8_t>((mac.octets[0] | 0x02) & 0xfe); // local, unicast
    return mac;
}

int cmd_gen_handshake(const GenHandshakeArgs& args) {
    HandshakeSpec spec{Passphrase(args.passphrase), Bytes(args.ssid.begin(), args.ssid.end()),
                       args.ap_mac.empty() ? derived_mac(args.seed, "ap-mac")
                                           : MacAddress::parse(args.ap_mac),
                       args.client_mac.empty() ? derived_mac(args.seed, "client-mac")
                                               : MacAddress::parse(args.client_mac),
                       std::nullopt,
                       std::nullopt,
                       args.descriptor_version,
                       args.all_four};
    if (!args.anonce.empty()) {
        std::array<std::uint8_t, kNonceSize> nonce{};
        Bytes raw = from_hex(args.anonce);
        if (raw.size() != kNonceSize) {
            throw ValidationError("--anonce must be 32 hex-encoded bytes");
        }
        std::copy(raw.begin(), raw.end(), nonce.begin());
        spec.anonce = nonce;
    }
    if (!args.snonce.empty()) {
        std::array<std::uint8_t, kNonceSize> nonce{};
        Bytes raw = from_hex(args.snonce);
        if (raw.size() != kNonceSize) {
            throw ValidationError("--snonce must be 32 hex-encoded bytes");
        }
        std::copy(raw.begin(), raw.end(), nonce.begin());
        spec.snonce = nonce;
    }

    GeneratedHandshake generated = generate_handshake(spec, args.seed);
    write_file(args.out, generated.pcap_bytes);
    if (!args.fixture.empty()) {
        write_file(args.fixture, store_fixture(generated.capture));
    }

    if (args.json) {
        ordered_json doc;
        doc["out"] = args.out;
        doc["pcap_bytes"] = generated.pcap_bytes.size();
        doc["fixture"] = args.fixture.empty() ? ordered_json(nullptr) : ordered_json(args.fixture);
        doc["ap_mac"] = spec.ap_mac.str();
        doc["client_mac"] = spec.client_mac.str();
        doc["complete"] = generated.capture.complete;
        print_json(doc);
    } else {
        std::cout << "wrote " << args.out << " (" << generated.pcap_bytes.size() << " bytes)\n";
        if (!args.fixture.empty()) {
            std::cout << "wrote " << args.fixture << '\n';
        }
        std::cout << "ap " << spec.ap_mac.str() << "  client " << spec.client_mac.str() << '\n';
    }
    return kExitFound;
}

struct EvilTwinArgs {
    std::string scenario_path;
    std::uint64_t seed = 0;
    std::string out;
    bool json = false;
};

int cmd_evil_twin(const EvilTwinArgs& args) {
    Bytes content = read_file(args.scenario_path);
    EvilTwinScenario scenario =
        load_scenario(std::string_view(reinterpret_cast<const char*>(content.data()),
                                       content.size()));
    EvilTwinLog log = simulate_evil_twin(scenario.clients, scenario.rogue, args.seed);
    write_file(args.out, store_evil_twin_log(log));

    if (args.json) {
        ordered_json doc;
        doc["out"] = args.out;
        doc["clients"] = scenario.clients.size();
        doc["captures"] = ordered_json::array();
        for (const auto& capture : log.captures) {
            doc["captures"].push_back(capture.client_name);
        }
        doc["refusals"] = ordered_json::array();
        for (const auto& refusal : log.refusals) {
            ordered_json entry;
            entry["client_name"] = refusal.client_name;
            entry["reason"] = to_string(refusal.reason);
            doc["refusals"].push_back(std::move(entry));
        }
        print_json(doc);
    } else {
        std::cout << "captures: " << log.captures.size() << '\n';
        for (const auto& capture : log.captures) {
            std::cout << "  " << capture.client_name << '\n';
        }
        std::cout << "refusals: " << log.refusals.size() << '\n';
        for (const auto& refusal : log.refusals) {
            std::cout << "  " << refusal.client_name << ": " << to_string(refusal.reason) << '\n';
        }
        std::cout << "wrote " << args.out << '\n';
    }
    return log.captures.empty() ? kExitNotFound : kExitFound;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Offline Wi-Fi security audit toolkit"};
    app.require_subcommand(1);

    std::string inspect_path;
    bool inspect_json = false;
    auto* inspect = app.add_subcommand("inspect", "Summarize a packet capture");
    inspect->add_option("capture", inspect_path, "pcap file to inspect")->required();
    inspect->add_flag("--json", inspect_json, "emit a JSON report on stdout");

    CrackPskArgs psk;
    auto* crack_psk_cmd =
        app.add_subcommand("crack-psk", "Dictionary attack against a captured 4-way handshake");
    crack_psk_cmd->add_option("capture", psk.capture_path, "pcap capture or handshake fixture")
        ->required();
    crack_psk_cmd->add_option("--wordlist", psk.wordlist, "candidate passphrases, one per line")
        ->required();
    crack_psk_cmd->add_option("--ssid", psk.ssid, "SSID override for captures without beacons");
    crack_psk_cmd->add_option("--bssid", psk.bssid,
                              "AP MAC to select when several handshakes are present");
    auto* psk_workers = crack_psk_cmd
                            ->add_option("--workers", psk.workers,
                                         "parallel worker threads (default from "
                                         "WIFI_AUDIT_WORKERS)")
                            ->check(CLI::Range(1u, 256u));
    crack_psk_cmd->add_option("--progress-interval", psk.progress_interval,
                              "seconds between progress lines on stderr");
    crack_psk_cmd->add_flag("--json", psk.json, "emit the result as JSON on stdout");

    CrackMsChapArgs mschap;
    auto* crack_mschap_cmd =
        app.add_subcommand("crack-mschapv2", "Dictionary attack against an MSCHAPv2 exchange");
    crack_mschap_cmd->add_option("--capture", mschap.capture_path,
                                 "capture JSON (single capture or evil-twin log)");
    crack_mschap_cmd->add_option("--username", mschap.username, "account name");
    crack_mschap_cmd->add_option("--auth-challenge", mschap.auth_challenge,
                                 "authenticator challenge, 16 bytes hex");
    crack_mschap_cmd->add_option("--peer-challenge", mschap.peer_challenge,
                                 "peer challenge, 16 bytes hex");
    crack_mschap_cmd->add_option("--response", mschap.response, "NT response, 24 bytes hex");
    crack_mschap_cmd->add_option("--client", mschap.client,
                                 "client name to select from an evil-twin log");
    crack_mschap_cmd->add_option("--wordlist", mschap.wordlist, "candidate passwords")
        ->required();
    auto* mschap_workers = crack_mschap_cmd
                               ->add_option("--workers", mschap.workers,
                                            "parallel worker threads (default from "
                                            "WIFI_AUDIT_WORKERS)")
                               ->check(CLI::Range(1u, 256u));
    crack_mschap_cmd->add_option("--progress-interval", mschap.progress_interval,
                                 "seconds between progress lines on stderr");
    crack_mschap_cmd->add_flag("--json", mschap.json, "emit the result as JSON on stdout");

    GenHandshakeArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-handshake",
                                       "Forge a valid 4-way handshake capture for a known "
                                       "passphrase");
    gen_cmd->add_option("--passphrase", gen.passphrase, "WPA2 passphrase (8..63 printable ASCII)")
        ->required();
    gen_cmd->add_option("--ssid", gen.ssid, "network name")->required();
    gen_cmd->add_option("--seed", gen.seed, "generation seed")->required();
    gen_cmd->add_option("--out", gen.out, "pcap output path")->required();
    gen_cmd->add_option("--fixture", gen.fixture, "also write the handshake fixture JSON here");
    gen_cmd->add_option("--ap-mac", gen.ap_mac, "AP MAC (default derived from the seed)");
    gen_cmd->add_option("--client-mac", gen.client_mac,
                        "client MAC (default derived from the seed)");
    gen_cmd->add_option("--anonce", gen.anonce, "explicit ANonce, 32 bytes hex");
    gen_cmd->add_option("--snonce", gen.snonce, "explicit SNonce, 32 bytes hex");
    gen_cmd->add_option("--descriptor-version", gen.descriptor_version,
                        "EAPOL key descriptor version (1 or 2)")
        ->check(CLI::Range(1, 2));
    gen_cmd->add_flag("--all-four", gen.all_four, "emit messages 3 and 4 as well");
    gen_cmd->add_flag("--json", gen.json, "emit a JSON summary on stdout");

    EvilTwinArgs twin;
    auto* twin_cmd = app.add_subcommand("evil-twin",
                                        "Simulate a rogue AP harvesting MSCHAPv2 credentials");
    twin_cmd->add_option("--scenario", twin.scenario_path, "scenario JSON path")->required();
    twin_cmd->add_option("--seed", twin.seed, "simulation seed")->required();
    twin_cmd->add_option("--out", twin.out, "log output path")->required();
    twin_cmd->add_flag("--json", twin.json, "emit a JSON summary on stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (app.got_subcommand(inspect)) return cmd_inspect(inspect_path, inspect_json);
        if (app.got_subcommand(crack_psk_cmd)) {
            psk.workers = resolve_workers(psk_workers->count() > 0, psk.workers);
            return cmd_crack_psk(psk);
        }
        if (app.got_subcommand(crack_mschap_cmd)) {
            mschap.workers = resolve_workers(mschap_workers->count() > 0, mschap.workers);
            return cmd_crack_mschapv2(mschap);
        }
        if (app.got_subcommand(gen_cmd)) return cmd_gen_handshake(gen);
        if (app.got_subcommand(twin_cmd)) return cmd_evil_twin(twin);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
