#include "wifiaudit/crack.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <thread>

#include "wifiaudit/des.hpp"
#include "wifiaudit/md4.hpp"

namespace wifiaudit {

namespace {

using Clock = std::chrono::steady_clock;

void atomic_min(std::atomic<std::size_t>& target, std::size_t value) {
    std::size_t current = target.load(std::memory_order_relaxed);
    while (value < current &&
           !target.compare_exchange_weak(current, value, std::memory_order_acq_rel)) {
    }
}

enum class Verdict { Match, NoMatch, Skip };

// Deterministic first-match search. Workers claim contiguous chunks in
// order; a match at index i stops new chunks from starting after i while
// chunks that began earlier run to completion, so the reported index is
// always the smallest match regardless of worker count.
CrackResult run_search(const std::vector<std::string>& candidates,
                       const CrackOptions& options,
                       std::size_t chunk_size,
                       const std::function<Verdict(const std::string&)>& evaluate) {
    if (options.worker_count < 1) {
        throw ValidationError("worker_count must be >= 1");
    }

    const std::size_t total = candidates.size();
    const auto start_time = Clock::now();

    std::atomic<std::size_t> next_chunk{0};
    std::atomic<std::size_t> best_index{SIZE_MAX};
    std::atomic<std::size_t> tested{0};
    std::atomic<std::size_t> skipped{0};

    auto worker = [&] {
        while (true) {
            std::size_t start = next_chunk.fetch_add(chunk_size, std::memory_order_relaxed);
            if (start >= total) break;
            if (start > best_index.load(std::memory_order_acquire)) break;
            std::size_t end = std::min(start + chunk_size, total);
            for (std::size_t i = start; i < end; ++i) {
                switch (evaluate(candidates[i])) {
                case Verdict::Skip:
                    skipped.fetch_add(1, std::memory_order_relaxed);
                    break;
                case Verdict::NoMatch:
                    tested.fetch_add(1, std::memory_order_relaxed);
                    break;
                case Verdict::Match:
                    tested.fetch_add(1, std::memory_order_relaxed);
                    atomic_min(best_index, i);
                    i = end; // the rest of this chunk only has larger indices
                    break;
                }
            }
        }
    };

    std::mutex progress_mutex;
    std::condition_variable progress_cv;
    bool done = false;
    std::thread reporter;
    if (options.on_progress) {
        reporter = std::thread([&] {
            std::unique_lock lock(progress_mutex);
            auto interval = std::chrono::duration<double>(
                std::max(options.progress_interval, 0.01));
            while (!progress_cv.wait_for(lock, interval, [&] { return done; })) {
                double elapsed = std::chrono::duration<double>(Clock::now() - start_time).count();
                std::size_t n = tested.load(std::memory_order_relaxed);
                options.on_progress({n, total, elapsed > 0 ? n / elapsed : 0.0});
            }
        });
    }

    if (options.worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(options.worker_count);
        for (unsigned i = 0; i < options.worker_count; ++i) {
            threads.emplace_back(worker);
        }
        for (auto& t : threads) {
            t.join();
        }
    }

    if (reporter.joinable()) {
        {
            std::lock_guard lock(progress_mutex);
            done = true;
        }
        progress_cv.notify_all();
        reporter.join();
    }

    CrackResult result;
    result.candidates_tested = tested.load();
    result.candidates_skipped = skipped.load();
    result.elapsed_seconds =
        std::chrono::duration<double>(Clock::now() - start_time).count();
    result.throughput = result.elapsed_seconds > 0
                            ? result.candidates_tested / result.elapsed_seconds
                            : 0.0;
    std::size_t found = best_index.load();
    if (found != SIZE_MAX) {
        result.match = FoundMatch{candidates[found], found};
    }
    return result;
}

} // namespace

Dictionary Dictionary::from_text(std::string_view text, std::string source) {
    Dictionary dict;
    dict.source = std::move(source);
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = nl == std::string_view::npos
                                    ? text.substr(pos)
                                    : text.substr(pos, nl - pos);
        if (nl == std::string_view::npos && line.empty()) break;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            ++dict.skipped_invalid;
        } else {
            dict.candidates.emplace_back(line);
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return dict;
}

Dictionary Dictionary::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open wordlist: " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_text(text, path.string());
}

bool verify_psk_candidate(const HandshakeCapture& handshake, const Passphrase& candidate,
                          const Bytes* ssid_override) {
    const Bytes& ssid = ssid_override ? *ssid_override : handshake.ssid;
    if (ssid.empty()) {
        throw ConfigError("handshake has no SSID; supply an explicit override");
    }
    auto pmk = derive_pmk(candidate, ssid);
    auto keys = derive_ptk(pmk, handshake.ap_mac, handshake.client_mac,
                           handshake.anonce, handshake.snonce);
    auto mic = compute_mic(keys.kck(), handshake.mic_frame, handshake.descriptor_version);
    return std::equal(mic.begin(), mic.end(), handshake.mic.begin());
}

CrackResult crack_psk(const HandshakeCapture& handshake, const Dictionary& dictionary,
                      const CrackOptions& options) {
    const Bytes& ssid = options.ssid_override ? *options.ssid_override : handshake.ssid;
    if (ssid.empty()) {
        throw ConfigError("handshake has no SSID; supply an explicit override");
    }
    if (std::all_of(handshake.mic.begin(), handshake.mic.end(),
                    [](std::uint8_t b) { return b == 0; })) {
        throw ValidationError("handshake mic is all zero; nothing to verify against");
    }

    auto evaluate = [&](const std::string& candidate) {
        if (!Passphrase::is_valid(candidate)) {
            return Verdict::Skip;
        }
        Passphrase passphrase(candidate);
        auto pmk = derive_pmk(passphrase, ssid);
        auto keys = derive_ptk(pmk, handshake.ap_mac, handshake.client_mac,
                               handshake.anonce, handshake.snonce);
        auto mic = compute_mic(keys.kck(), handshake.mic_frame, handshake.descriptor_version);
        return std::equal(mic.begin(), mic.end(), handshake.mic.begin()) ? Verdict::Match
                                                                         : Verdict::NoMatch;
    };
    // PBKDF2 dominates at ~1ms per candidate; small chunks keep workers busy.
    return run_search(dictionary.candidates, options, 8, evaluate);
}

CrackResult crack_mschapv2(const MsChapV2Capture& capture, const Dictionary& dictionary,
                           const CrackOptions& options) {
    if (capture.username.empty()) {
        throw ValidationError("capture username must be non-empty");
    }
    if (std::all_of(capture.response.begin(), capture.response.end(),
                    [](std::uint8_t b) { return b == 0; })) {
        throw ValidationError("capture response is all zero");
    }

    Bytes username = strip_domain_prefix(capture.username);
    auto challenge = mschapv2_challenge_hash(capture.peer_challenge, capture.auth_challenge,
                                             username);

    auto evaluate = [&](const std::string& candidate) {
        Bytes encoded;
        try {
            encoded = utf16le_encode(candidate);
        } catch (const ValidationError&) {
            return Verdict::Skip;
        }
        // Check the response in 8-byte thirds so most wrong candidates cost
        // a single DES operation.
        std::array<std::uint8_t, 21> padded{};
        auto hash = md4(encoded);
        std::copy(hash.begin(), hash.end(), padded.begin());
        for (int i = 0; i < 3; ++i) {
            auto key = des_expand_key(std::span(padded).subspan(i * 7, 7));
            auto block = des_encrypt_block(key, challenge);
            if (!std::equal(block.begin(), block.end(), capture.response.begin() + i * 8)) {
                return Verdict::NoMatch;
            }
        }
        return Verdict::Match;
    };
    return run_search(dictionary.candidates, options, 256, evaluate);
}

} // namespace wifiaudit
