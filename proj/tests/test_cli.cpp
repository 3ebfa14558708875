#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "wifiaudit/capture.hpp"
#include "wifiaudit/crypto.hpp"
#include "wifiaudit/pcap.hpp"
#include "wifiaudit/simlab.hpp"

using namespace wifiaudit;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void spit(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    REQUIRE(out.good());
}

void spit(const fs::path& path, const Bytes& bytes) {
    spit(path, std::string(bytes.begin(), bytes.end()));
}

/// Scratch directory plus a shell runner for the wifi-audit binary.
struct Cli {
    fs::path dir;

    Cli() {
        std::string tmpl = (fs::temp_directory_path() / "wifiaudit-cli-XXXXXX").string();
        char* made = mkdtemp(tmpl.data());
        REQUIRE(made != nullptr);
        dir = made;
    }
    ~Cli() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }

    fs::path path(const std::string& name) const { return dir / name; }

    RunResult run(const std::string& args, const std::string& env_prefix = "") const {
        fs::path out_path = dir / ".stdout";
        fs::path err_path = dir / ".stderr";
        std::string command = env_prefix + (env_prefix.empty() ? "" : " ") + WIFI_AUDIT_BIN +
                              " " + args + " >" + out_path.string() + " 2>" + err_path.string();
        int status = std::system(command.c_str());
        RunResult result;
        result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        result.out = slurp(out_path);
        result.err = slurp(err_path);
        return result;
    }
};

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

constexpr const char* kLabWordlist =
    "not-the-one\nwrong-guess-2\ncorrecthorse\nanother-wrong\n";

constexpr const char* kScenario = R"({
  "rogue": {"ssid": "CoffeeShop_Guest", "cert_id": "rogue-cert-01"},
  "clients": [
    {"name": "phone-1", "username": "alice", "password": "Summer2024!",
     "trust_policy": "accept-any"},
    {"name": "laptop-2", "username": "CORP\\bob", "password": "hunter2hunter2",
     "trust_policy": "accept-any"},
    {"name": "tablet-3", "username": "carol", "password": "correct horse battery",
     "trust_policy": "accept-any"},
    {"name": "cautious-4", "username": "dave", "password": "S3cr3t-dave",
     "trust_policy": "prompt-on-unknown-cert"},
    {"name": "pinned-5", "username": "erin", "password": "S3cr3t-erin",
     "trust_policy": "validate-pinned-cert", "pinned_cert_id": "corp-legit-cert"}
  ]
})";

} // namespace

TEST_CASE("usage errors exit with code 2") {
    Cli cli;
    CHECK(cli.run("").exit_code == 2);                    // a subcommand is required
    CHECK(cli.run("no-such-command").exit_code == 2);
    CHECK(cli.run("inspect").exit_code == 2);             // missing positional
    CHECK(cli.run("--help").exit_code == 0);
    CHECK(cli.run("crack-psk --wordlist w").exit_code == 2);
}

TEST_CASE("gen-handshake is deterministic and validates its flags") {
    Cli cli;
    std::string base = "gen-handshake --passphrase correcthorse --ssid TestLab-5G --seed 42";

    RunResult first = cli.run(base + " --out " + cli.path("a.pcap").string());
    CHECK(first.exit_code == 0);
    CHECK(contains(first.out, "wrote"));

    RunResult second = cli.run(base + " --out " + cli.path("b.pcap").string());
    CHECK(second.exit_code == 0);
    CHECK(slurp(cli.path("a.pcap")) == slurp(cli.path("b.pcap")));

    RunResult reseeded = cli.run(
        "gen-handshake --passphrase correcthorse --ssid TestLab-5G --seed 43 --out " +
        cli.path("c.pcap").string());
    CHECK(reseeded.exit_code == 0);
    CHECK(slurp(cli.path("a.pcap")) != slurp(cli.path("c.pcap")));

    RunResult short_pass = cli.run(
        "gen-handshake --passphrase short12 --ssid TestLab-5G --seed 1 --out " +
        cli.path("d.pcap").string());
    CHECK(short_pass.exit_code == 2);
    CHECK(contains(short_pass.err, "passphrase must be 8..63 characters (got 7)"));
    CHECK_FALSE(fs::exists(cli.path("d.pcap")));

    CHECK(cli.run("gen-handshake --passphrase correcthorse --ssid TestLab-5G --seed 1 "
                  "--descriptor-version 3 --out " +
                  cli.path("e.pcap").string())
              .exit_code == 2);

    RunResult json = cli.run(base + " --all-four --json --out " + cli.path("f.pcap").string() +
                             " --fixture " + cli.path("f.json").string());
    CHECK(json.exit_code == 0);
    auto doc = nlohmann::json::parse(json.out);
    CHECK(doc.at("pcap_bytes").get<std::size_t>() > 0);
    CHECK(doc.at("complete").get<bool>());
    CHECK(load_fixture(slurp(cli.path("f.json"))).complete);
}

TEST_CASE("inspect reports handshakes and drives its exit code off them") {
    Cli cli;
    std::string pcap = cli.path("lab.pcap").string();
    REQUIRE(cli.run("gen-handshake --passphrase correcthorse --ssid TestLab-5G --seed 42 "
                    "--all-four --out " + pcap).exit_code == 0);

    RunResult text = cli.run("inspect " + pcap);
    CHECK(text.exit_code == 0);
    CHECK(contains(text.out, "handshakes: 1"));
    CHECK(contains(text.out, "TestLab-5G"));
    CHECK(contains(text.out, "eapol v2  complete"));

    RunResult json = cli.run("inspect " + pcap + " --json");
    CHECK(json.exit_code == 0);
    auto doc = nlohmann::json::parse(json.out);
    CHECK(doc.at("handshakes").size() == 1);
    CHECK(doc.at("handshakes")[0].at("ssid") == "TestLab-5G");
    CHECK(doc.at("frames_parsed").get<int>() == 5);

    PcapFile empty;
    empty.link_type = kLinkTypeIeee80211;
    spit(cli.path("empty.pcap"), write_pcap(empty));
    CHECK(cli.run("inspect " + cli.path("empty.pcap").string()).exit_code == 1);

    CHECK(cli.run("inspect " + cli.path("missing.pcap").string()).exit_code == 2);

    spit(cli.path("garbage.pcap"), std::string(100, 'x'));
    RunResult garbage = cli.run("inspect " + cli.path("garbage.pcap").string());
    CHECK(garbage.exit_code == 2);
    CHECK(contains(garbage.err, "unrecognized capture file magic"));
}

TEST_CASE("crack-psk end to end") {
    Cli cli;
    std::string pcap = cli.path("lab.pcap").string();
    std::string words = cli.path("words.txt").string();
    REQUIRE(cli.run("gen-handshake --passphrase correcthorse --ssid TestLab-5G --seed 42 "
                    "--all-four --out " + pcap + " --fixture " +
                    cli.path("lab.json").string()).exit_code == 0);
    spit(cli.path("words.txt"), std::string(kLabWordlist));

    SUBCASE("match found") {
        RunResult found = cli.run("crack-psk " + pcap + " --wordlist " + words);
        CHECK(found.exit_code == 0);
        CHECK(contains(found.out, "found: correcthorse (index 2)"));
    }

    SUBCASE("json output is a single document on stdout") {
        RunResult found = cli.run("crack-psk " + pcap + " --wordlist " + words + " --json");
        CHECK(found.exit_code == 0);
        auto doc = nlohmann::json::parse(found.out); // throws if stdout is polluted
        CHECK(doc.at("outcome") == "found");
        CHECK(doc.at("candidate") == "correcthorse");
        CHECK(doc.at("index") == 2);
        CHECK(doc.at("candidates_skipped") == 0);
    }

    SUBCASE("exhausted dictionary exits 1") {
        spit(cli.path("none.txt"), std::string("wrong-one\nwrong-two\n"));
        RunResult missed = cli.run("crack-psk " + pcap + " --wordlist " +
                                   cli.path("none.txt").string() + " --json");
        CHECK(missed.exit_code == 1);
        auto doc = nlohmann::json::parse(missed.out);
        CHECK(doc.at("outcome") == "exhausted");
        CHECK(doc.at("candidate").is_null());
        CHECK(doc.at("index").is_null());
    }

    SUBCASE("fixture input behaves like the pcap") {
        RunResult found = cli.run("crack-psk " + cli.path("lab.json").string() +
                                  " --wordlist " + words);
        CHECK(found.exit_code == 0);
        CHECK(contains(found.out, "found: correcthorse (index 2)"));
    }

    SUBCASE("ssid override replaces the captured name") {
        CHECK(cli.run("crack-psk " + pcap + " --wordlist " + words +
                      " --ssid TestLab-5G").exit_code == 0);
        CHECK(cli.run("crack-psk " + pcap + " --wordlist " + words +
                      " --ssid SomeOtherNet").exit_code == 1);
    }

    SUBCASE("workers flag and environment variable") {
        CHECK(cli.run("crack-psk " + pcap + " --wordlist " + words + " --workers 2")
                  .exit_code == 0);
        CHECK(cli.run("crack-psk " + pcap + " --wordlist " + words,
                      "WIFI_AUDIT_WORKERS=2").exit_code == 0);

        RunResult bad_env = cli.run("crack-psk " + pcap + " --wordlist " + words,
                                    "WIFI_AUDIT_WORKERS=0");
        CHECK(bad_env.exit_code == 2);
        CHECK(contains(bad_env.err, "WIFI_AUDIT_WORKERS must be an integer in 1..256"));
        CHECK(cli.run("crack-psk " + pcap + " --wordlist " + words,
                      "WIFI_AUDIT_WORKERS=eight").exit_code == 2);

        // An explicit flag beats the environment.
        CHECK(cli.run("crack-psk " + pcap + " --wordlist " + words + " --workers 1",
                      "WIFI_AUDIT_WORKERS=bogus").exit_code == 0);
        CHECK(cli.run("crack-psk " + pcap + " --wordlist " + words + " --workers 300")
                  .exit_code == 2);
    }

    SUBCASE("input problems exit 2") {
        CHECK(cli.run("crack-psk " + cli.path("missing.pcap").string() + " --wordlist " + words)
                  .exit_code == 2);
        RunResult no_words = cli.run("crack-psk " + pcap + " --wordlist " +
                                     cli.path("missing.txt").string());
        CHECK(no_words.exit_code == 2);
        CHECK(contains(no_words.err, "cannot open wordlist"));
        CHECK(cli.run("crack-psk " + pcap + " --wordlist " + words + " --bssid nonsense")
                  .exit_code == 2);
    }
}

TEST_CASE("crack-psk requires an unambiguous handshake") {
    Cli cli;
    REQUIRE(cli.run("gen-handshake --passphrase correcthorse --ssid TestLab-5G --seed 42 "
                    "--ap-mac 02:11:22:33:44:55 --client-mac 02:66:77:88:99:aa --out " +
                    cli.path("one.pcap").string()).exit_code == 0);
    REQUIRE(cli.run("gen-handshake --passphrase correcthorse --ssid OfficeNet --seed 9 "
                    "--ap-mac 02:aa:bb:cc:dd:ee --client-mac 02:01:02:03:04:05 --out " +
                    cli.path("two.pcap").string()).exit_code == 0);

    std::string one_bytes = slurp(cli.path("one.pcap"));
    std::string two_bytes = slurp(cli.path("two.pcap"));
    PcapFile merged = read_pcap(Bytes{one_bytes.begin(), one_bytes.end()});
    PcapFile tail = read_pcap(Bytes{two_bytes.begin(), two_bytes.end()});
    merged.records.insert(merged.records.end(), tail.records.begin(), tail.records.end());
    spit(cli.path("both.pcap"), write_pcap(merged));
    spit(cli.path("words.txt"), std::string(kLabWordlist));

    std::string base = "crack-psk " + cli.path("both.pcap").string() + " --wordlist " +
                       cli.path("words.txt").string();

    RunResult ambiguous = cli.run(base);
    CHECK(ambiguous.exit_code == 2);
    CHECK(contains(ambiguous.err, "2 handshakes found; select one with --bssid"));
    CHECK(contains(ambiguous.err, "02:11:22:33:44:55"));
    CHECK(contains(ambiguous.err, "02:aa:bb:cc:dd:ee"));

    RunResult selected = cli.run(base + " --bssid 02:aa:bb:cc:dd:ee");
    CHECK(selected.exit_code == 0);
    CHECK(contains(selected.out, "found: correcthorse"));

    RunResult absent = cli.run(base + " --bssid 02:00:00:00:00:07");
    CHECK(absent.exit_code == 2);
    CHECK(contains(absent.err, "no usable handshake"));
}

TEST_CASE("crack-mschapv2 accepts exactly one input form") {
    Cli cli;
    spit(cli.path("words.txt"), std::string("password\nletmein\nclientPass\n"));
    std::string words = " --wordlist " + cli.path("words.txt").string();
    std::string flags =
        " --username User"
        " --auth-challenge 5b5d7c7d7b3f2f3e3c2c602132262628"
        " --peer-challenge 21402324255e262a28295f2b3a337c7e"
        " --response ";
    std::string response = to_hex(mschapv2_response(
        "clientPass", from_hex("21402324255e262a28295f2b3a337c7e"),
        from_hex("5b5d7c7d7b3f2f3e3c2c602132262628"), Bytes{'U', 's', 'e', 'r'}));

    SUBCASE("flag form finds the password") {
        RunResult found = cli.run("crack-mschapv2" + flags + response + words + " --json");
        CHECK(found.exit_code == 0);
        auto doc = nlohmann::json::parse(found.out);
        CHECK(doc.at("outcome") == "found");
        CHECK(doc.at("candidate") == "clientPass");
        CHECK(doc.at("index") == 2);
    }

    SUBCASE("exhaustion exits 1") {
        spit(cli.path("none.txt"), std::string("wrong\nguesses\n"));
        CHECK(cli.run("crack-mschapv2" + flags + response + " --wordlist " +
                      cli.path("none.txt").string()).exit_code == 1);
    }

    SUBCASE("both forms or neither is a usage error") {
        spit(cli.path("cap.json"), store_mschapv2_capture([&] {
            MsChapV2Capture cap;
            cap.username = Bytes{'U', 's', 'e', 'r'};
            cap.auth_challenge = {0x5b, 0x5d, 0x7c, 0x7d, 0x7b, 0x3f, 0x2f, 0x3e,
                                  0x3c, 0x2c, 0x60, 0x21, 0x32, 0x26, 0x26, 0x28};
            cap.peer_challenge = {0x21, 0x40, 0x23, 0x24, 0x25, 0x5e, 0x26, 0x2a,
                                  0x28, 0x29, 0x5f, 0x2b, 0x3a, 0x33, 0x7c, 0x7e};
            cap.response = mschapv2_response("clientPass", cap.peer_challenge,
                                             cap.auth_challenge, cap.username);
            return cap;
        }()));

        RunResult both = cli.run("crack-mschapv2 --capture " + cli.path("cap.json").string() +
                                 flags + response + words);
        CHECK(both.exit_code == 2);
        CHECK(contains(both.err, "provide either --capture or the full"));

        RunResult neither = cli.run("crack-mschapv2" + words);
        CHECK(neither.exit_code == 2);
        CHECK(contains(neither.err, "provide either --capture or the full"));

        RunResult partial = cli.run("crack-mschapv2 --username User" + words);
        CHECK(partial.exit_code == 2);
        CHECK(contains(partial.err, "the flag form requires all of"));

        RunResult from_file = cli.run("crack-mschapv2 --capture " +
                                      cli.path("cap.json").string() + words);
        CHECK(from_file.exit_code == 0);
        CHECK(contains(from_file.out, "found: clientPass"));
    }

    SUBCASE("malformed hex is a usage error") {
        RunResult bad = cli.run("crack-mschapv2 --username User --auth-challenge zz"
                                " --peer-challenge 21402324255e262a28295f2b3a337c7e"
                                " --response " + response + words);
        CHECK(bad.exit_code == 2);
        CHECK(contains(bad.err, "invalid hex character"));

        RunResult short_hex = cli.run("crack-mschapv2 --username User"
                                      " --auth-challenge abcd"
                                      " --peer-challenge 21402324255e262a28295f2b3a337c7e"
                                      " --response " + response + words);
        CHECK(short_hex.exit_code == 2);
        CHECK(contains(short_hex.err, "--auth-challenge must be 16 hex-encoded bytes (got 2)"));
    }
}

TEST_CASE("evil-twin runs a scenario and the log feeds the cracker") {
    Cli cli;
    spit(cli.path("scenario.json"), std::string(kScenario));
    std::string base = "evil-twin --scenario " + cli.path("scenario.json").string() +
                       " --seed 7 --out ";

    RunResult run = cli.run(base + cli.path("log.json").string() + " --json");
    CHECK(run.exit_code == 0);
    auto doc = nlohmann::json::parse(run.out);
    CHECK(doc.at("clients") == 5);
    CHECK(doc.at("captures") == nlohmann::json::array({"phone-1", "laptop-2", "tablet-3"}));
    CHECK(doc.at("refusals").size() == 2);
    CHECK(doc.at("refusals")[0].at("reason") == "prompt-declined");
    CHECK(doc.at("refusals")[1].at("reason") == "pin-mismatch");

    EvilTwinLog log = load_evil_twin_log(slurp(cli.path("log.json")));
    CHECK(log.captures.size() == 3);
    CHECK(log.refusals.size() == 2);

    // Same seed, same bytes.
    CHECK(cli.run(base + cli.path("log2.json").string()).exit_code == 0);
    CHECK(slurp(cli.path("log.json")) == slurp(cli.path("log2.json")));

    // The harvested log cracks through the CLI.
    spit(cli.path("words.txt"), std::string("nope\nSummer2024!\nhunter2hunter2\n"));
    RunResult ambiguous = cli.run("crack-mschapv2 --capture " + cli.path("log.json").string() +
                                  " --wordlist " + cli.path("words.txt").string());
    CHECK(ambiguous.exit_code == 2);
    CHECK(contains(ambiguous.err,
                   "log holds 3 captures; select one with --client (phone-1, laptop-2, "
                   "tablet-3)"));

    RunResult cracked = cli.run("crack-mschapv2 --capture " + cli.path("log.json").string() +
                                " --client laptop-2 --wordlist " +
                                cli.path("words.txt").string());
    CHECK(cracked.exit_code == 0);
    CHECK(contains(cracked.out, "found: hunter2hunter2 (index 2)"));

    RunResult unknown_client = cli.run("crack-mschapv2 --capture " +
                                       cli.path("log.json").string() +
                                       " --client nobody --wordlist " +
                                       cli.path("words.txt").string());
    CHECK(unknown_client.exit_code == 2);
    CHECK(contains(unknown_client.err, "no capture for client \"nobody\""));
}

TEST_CASE("evil-twin exit codes track the capture count") {
    Cli cli;
    spit(cli.path("refusers.json"), std::string(R"({
        "rogue": {"ssid": "CoffeeShop_Guest", "cert_id": "rogue-cert-01"},
        "clients": [
            {"name": "wary", "username": "bob", "password": "pw",
             "trust_policy": "prompt-on-unknown-cert"}
        ]
    })"));
    RunResult none = cli.run("evil-twin --scenario " + cli.path("refusers.json").string() +
                             " --seed 1 --out " + cli.path("log.json").string());
    CHECK(none.exit_code == 1);
    CHECK(load_evil_twin_log(slurp(cli.path("log.json"))).captures.empty());

    spit(cli.path("bad.json"), std::string(R"({
        "rogue": {"ssid": "CoffeeShop_Guest", "cert_id": "rogue-cert-01"},
        "clients": [{"name": "x", "username": "u", "password": "p",
                     "trust_policy": "accept-any", "extra": true}]
    })"));
    RunResult bad = cli.run("evil-twin --scenario " + cli.path("bad.json").string() +
                            " --seed 1 --out " + cli.path("log3.json").string());
    CHECK(bad.exit_code == 2);
    CHECK(contains(bad.err, "unknown field \"clients[0].extra\""));

    CHECK(cli.run("evil-twin --scenario " + cli.path("nothere.json").string() +
                  " --seed 1 --out " + cli.path("log4.json").string()).exit_code == 2);
}
