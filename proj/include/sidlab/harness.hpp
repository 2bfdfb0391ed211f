#pragma once

// Monte Carlo driver: sweeps Eb/N0, runs N independent trials per point,
// aggregates stage traces into per-point BER records, computes coding gains
// by curve interpolation, and reads/writes the CSV + manifest pair.
//
// Determinism: trial t of every sweep point uses RngStream(seed, t), so the
// full output is a pure function of (config, seed) regardless of the worker
// count, and matched configs share channel noise trial-for-trial.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sidlab/channel.hpp"
#include "sidlab/pipeline.hpp"
#include "sidlab/version.hpp"

namespace sidlab {

struct SweepSpec {
    double start = 1.0;
    double stop = 5.0;
    double step = 1.0;

    void validate() const {
        if (!(step > 0.0)) throw std::invalid_argument("SweepSpec: step must be positive");
        if (stop < start) throw std::invalid_argument("SweepSpec: empty sweep");
    }

    std::vector<double> points() const {
        validate();
        std::vector<double> pts;
        const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        pts.reserve(n);
        for (std::size_t i = 0; i < n; ++i) pts.push_back(start + static_cast<double>(i) * step);
        return pts;
    }
};

struct SimConfig {
    CodeSpec code{};
    SweepSpec sweep{};
    std::uint32_t trials = 50000;
    std::uint32_t msg_bits_a = 256;
    std::uint32_t tag_bits_a = 64;
    std::uint32_t msg_bits_b = 256;
    std::uint32_t tag_bits_b = 64;
    SidConfig sid{};
    Scheme scheme = Scheme::serial;
    std::uint64_t seed = 1;
    std::string key_hex = "000102030405060708090a0b0c0d0e0f";
    std::string out_path = "sweep.csv";
    unsigned threads = 0;  // 0 = hardware concurrency

    FrameGeometry geometry() const {
        return FrameGeometry(msg_bits_a + tag_bits_a, msg_bits_b + tag_bits_b);
    }

    CcfKey key() const { return CcfKey::from_hex(key_hex); }

    void validate() const {
        code.validate();
        sweep.validate();
        sid.validate();
        if (trials < 1) throw std::invalid_argument("SimConfig: trials must be >= 1");
        (void)geometry();
        (void)key();
        if (tag_bits_a < kMinTagBits || tag_bits_a > kMaxTagBits ||
            tag_bits_b < kMinTagBits || tag_bits_b > kMaxTagBits)
            throw std::invalid_argument("SimConfig: tag bits out of range");
    }
};

// Aggregated per-Eb/N0 statistics. Each BER is summed stage errors over
// summed info bits; the standard error is sqrt(p(1-p)/bits). A stage whose
// error sum is zero is reported as 0 and listed as unresolved in the manifest
// (the sweep cannot resolve BERs below 1/bits).
struct BERRecord {
    double ebn0_db = 0.0;
    double ber_cd1 = 0.0, se_cd1 = 0.0;
    double ber_1sid = 0.0, se_1sid = 0.0;
    double ber_cd2 = 0.0, se_cd2 = 0.0;
    double ber_2sid = 0.0, se_2sid = 0.0;
    double sid_a_rate = 0.0;
    double sid_b_rate = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t bits = 0;
};

namespace detail {

inline double standard_error(double p, double bits) {
    if (bits <= 0.0) return 0.0;
    const double v = p * (1.0 - p) / bits;
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

}  // namespace detail

inline BERRecord aggregate_traces(const std::vector<StageTrace>& traces, double ebn0_db) {
    BERRecord r;
    r.ebn0_db = ebn0_db;
    r.trials = traces.size();
    std::uint64_t e1 = 0, e2 = 0, e3 = 0, e4 = 0, bits = 0, sa = 0, sb = 0;
    for (const auto& t : traces) {
        e1 += t.errors_cd1;
        e2 += t.errors_1sid;
        e3 += t.errors_cd2;
        e4 += t.errors_2sid;
        bits += t.bits_total;
        sa += t.sid_a_success ? 1 : 0;
        sb += t.sid_b_success ? 1 : 0;
    }
    r.bits = bits;
    const double fb = static_cast<double>(bits);
    r.ber_cd1 = static_cast<double>(e1) / fb;
    r.ber_1sid = static_cast<double>(e2) / fb;
    r.ber_cd2 = static_cast<double>(e3) / fb;
    r.ber_2sid = static_cast<double>(e4) / fb;
    r.se_cd1 = detail::standard_error(r.ber_cd1, fb);
    r.se_1sid = detail::standard_error(r.ber_1sid, fb);
    r.se_cd2 = detail::standard_error(r.ber_cd2, fb);
    r.se_2sid = detail::standard_error(r.ber_2sid, fb);
    r.sid_a_rate = static_cast<double>(sa) / static_cast<double>(r.trials);
    r.sid_b_rate = static_cast<double>(sb) / static_cast<double>(r.trials);
    return r;
}

// All trials of one sweep point, in trial order. Trials fan out over a worker
// pool; each trial owns its RngStream so the result does not depend on the
// worker count.
inline std::vector<StageTrace> run_point_traces(const SimConfig& cfg, double ebn0_db) {
    cfg.validate();
    const ChannelParams params = ChannelParams::from_ebn0(ebn0_db, 0.5);
    const CcfKey key = cfg.key();
    const PipelineConfig pcfg{cfg.code, cfg.sid};
    const std::uint32_t n = cfg.trials;

    std::vector<StageTrace> traces(n);
    auto worker = [&](std::uint32_t first, std::uint32_t stride) {
        for (std::uint32_t t = first; t < n; t += stride) {
            RngStream rng(cfg.seed, t);
            const BitVec ma = random_bits(rng, cfg.msg_bits_a);
            const BitVec mb = random_bits(rng, cfg.msg_bits_b);
            const FramePair frame = build_frame(ma, mb, key, static_cast<int>(cfg.tag_bits_a),
                                                static_cast<int>(cfg.tag_bits_b));
            traces[t] = run_trial(cfg.scheme, frame, params, key, pcfg, rng);
        }
    };

    unsigned workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, n);
    if (workers <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, w, workers);
        for (auto& th : pool) th.join();
    }
    return traces;
}

inline BERRecord simulate_point(const SimConfig& cfg, double ebn0_db) {
    return aggregate_traces(run_point_traces(cfg, ebn0_db), ebn0_db);
}

inline std::vector<BERRecord> sweep(const SimConfig& cfg) {
    cfg.validate();
    std::vector<BERRecord> records;
    for (double ebn0 : cfg.sweep.points()) records.push_back(simulate_point(cfg, ebn0));
    return records;
}

// ---- coding gain ----------------------------------------------------------

struct Curve {
    std::string id;
    std::vector<std::pair<double, double>> points;  // (ebn0_db, ber), ascending dB
};

struct GainReport {
    std::string reference_id;
    std::string test_id;
    double target_ber = 0.0;
    double reference_ebn0_db = 0.0;
    double test_ebn0_db = 0.0;
    double gain_db = 0.0;
};

inline const std::vector<std::string>& ber_column_names() {
    static const std::vector<std::string> names = {"ber_cd1", "ber_1sid", "ber_cd2", "ber_2sid"};
    return names;
}

inline Curve extract_curve(const std::vector<BERRecord>& records, const std::string& column,
                           const std::string& id) {
    Curve c;
    c.id = id;
    for (const auto& r : records) {
        double v;
        if (column == "ber_cd1") v = r.ber_cd1;
        else if (column == "ber_1sid") v = r.ber_1sid;
        else if (column == "ber_cd2") v = r.ber_cd2;
        else if (column == "ber_2sid") v = r.ber_2sid;
        else throw std::invalid_argument("extract_curve: unknown column " + column);
        c.points.emplace_back(r.ebn0_db, v);
    }
    return c;
}

// Eb/N0 achieving the target BER, by interpolation linear in dB and linear in
// log10(BER). Zero-BER points cannot enter the interpolation (no log); the
// first bracketing segment from the left is used.
inline double ebn0_at_ber(const Curve& curve, double target_ber) {
    if (!(target_ber > 0.0)) throw std::invalid_argument("ebn0_at_ber: target must be positive");
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const auto [x0, b0] = curve.points[i];
        const auto [x1, b1] = curve.points[i + 1];
        if (!(b0 > 0.0) || !(b1 > 0.0)) continue;
        if (b0 >= target_ber && target_ber >= b1) {
            if (b0 == b1) return x0;
            const double t = (std::log10(b0) - std::log10(target_ber)) /
                             (std::log10(b0) - std::log10(b1));
            return x0 + t * (x1 - x0);
        }
    }
    char target[32];
    std::snprintf(target, sizeof(target), "%.6g", target_ber);
    throw std::domain_error("coding gain: target BER " + std::string(target) +
                            " not bracketed by curve " + curve.id);
}

inline GainReport coding_gain(const Curve& reference, const Curve& test, double target_ber) {
    GainReport g;
    g.reference_id = reference.id;
    g.test_id = test.id;
    g.target_ber = target_ber;
    g.reference_ebn0_db = ebn0_at_ber(reference, target_ber);
    g.test_ebn0_db = ebn0_at_ber(test, target_ber);
    g.gain_db = g.reference_ebn0_db - g.test_ebn0_db;
    return g;
}

// ---- CSV + manifest -------------------------------------------------------

inline constexpr std::string_view kCsvHeader =
    "ebn0_db,ber_cd1,se_cd1,ber_1sid,se_1sid,ber_cd2,se_cd2,ber_2sid,se_2sid,"
    "sid_a_rate,sid_b_rate,trials,bits";

namespace detail {

inline std::string format_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::string csv_row(const BERRecord& r) {
    std::ostringstream os;
    os << format_g(r.ebn0_db) << ',' << format_g(r.ber_cd1) << ',' << format_g(r.se_cd1) << ','
       << format_g(r.ber_1sid) << ',' << format_g(r.se_1sid) << ',' << format_g(r.ber_cd2) << ','
       << format_g(r.se_cd2) << ',' << format_g(r.ber_2sid) << ',' << format_g(r.se_2sid) << ','
       << format_g(r.sid_a_rate) << ',' << format_g(r.sid_b_rate) << ',' << r.trials << ','
       << r.bits;
    return os.str();
}

inline std::string generators_octal(const CodeSpec& code) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%o,%o", code.gen0, code.gen1);
    return buf;
}

// Stages reported as 0 that the run cannot actually resolve (BER < 1/bits).
inline std::string unresolved_stages(const std::vector<BERRecord>& records) {
    std::string out;
    auto note = [&](const BERRecord& r, double ber, const char* stage) {
        if (r.bits > 0 && ber == 0.0) {
            if (!out.empty()) out += "; ";
            out += "ebn0_db=" + format_g(r.ebn0_db) + " stage=" + stage;
        }
    };
    for (const auto& r : records) {
        note(r, r.ber_cd1, "ber_cd1");
        note(r, r.ber_1sid, "ber_1sid");
        note(r, r.ber_cd2, "ber_cd2");
        note(r, r.ber_2sid, "ber_2sid");
    }
    return out;
}

}  // namespace detail

// Writes the CSV at `path` and the manifest at `path + ".manifest"`. The
// manifest holds the full config, seed, RNG identity, artifact version, any
// unresolved-floor notes and the gain reports; only its timestamp line varies
// between identical runs.
inline void emit_csv(const std::vector<BERRecord>& records, const std::vector<GainReport>& gains,
                     const SimConfig& cfg, const std::string& path) {
    if (records.empty()) throw std::invalid_argument("emit_csv: no records");
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw std::runtime_error("emit_csv: cannot open " + path);
    csv << kCsvHeader << '\n';
    for (const auto& r : records) csv << detail::csv_row(r) << '\n';
    csv.flush();
    if (!csv) throw std::runtime_error("emit_csv: write failed for " + path);

    const std::string mpath = path + ".manifest";
    std::ofstream mf(mpath, std::ios::binary);
    if (!mf) throw std::runtime_error("emit_csv: cannot open " + mpath);
    char stamp[32] = "unknown";
    const std::time_t now = std::time(nullptr);
    if (std::tm tm{}; gmtime_r(&now, &tm) != nullptr)
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);
    mf << "artifact=sidlab\n"
       << "version=" << kVersion << '\n'
       << "timestamp=" << stamp << '\n'
       << "scheme=" << to_string(cfg.scheme) << '\n'
       << "seed=" << cfg.seed << '\n'
       << "trials=" << cfg.trials << '\n'
       << "trial_unit=frame\n"
       << "ebn0_start=" << detail::format_g(cfg.sweep.start) << '\n'
       << "ebn0_stop=" << detail::format_g(cfg.sweep.stop) << '\n'
       << "ebn0_step=" << detail::format_g(cfg.sweep.step) << '\n'
       << "memory=" << cfg.code.memory << '\n'
       << "generators=" << detail::generators_octal(cfg.code) << '\n'
       << "termination=" << (cfg.code.termination ? "true" : "false") << '\n'
       << "msg_bits_a=" << cfg.msg_bits_a << '\n'
       << "tag_bits_a=" << cfg.tag_bits_a << '\n'
       << "msg_bits_b=" << cfg.msg_bits_b << '\n'
       << "tag_bits_b=" << cfg.tag_bits_b << '\n'
       << "flip_budget=" << cfg.sid.flip_budget << '\n'
       << "key_hex=" << cfg.key_hex << '\n'
       << "rng=" << kRngAlgorithm << '\n'
       << "threads=" << cfg.threads << '\n';
    if (const std::string unresolved = detail::unresolved_stages(records); !unresolved.empty())
        mf << "unresolved=" << unresolved << '\n';
    for (std::size_t i = 0; i < gains.size(); ++i)
        mf << "gain." << i << "=ref=" << gains[i].reference_id << " test=" << gains[i].test_id
           << " target_ber=" << detail::format_g(gains[i].target_ber)
           << " gain_db=" << detail::format_g(gains[i].gain_db) << '\n';
    mf.flush();
    if (!mf) throw std::runtime_error("emit_csv: write failed for " + mpath);
}

inline std::vector<BERRecord> parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("parse_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("parse_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw std::runtime_error("parse_csv: unexpected header in " + path);
    std::vector<BERRecord> records;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 13) throw std::runtime_error("parse_csv: malformed row in " + path);
        BERRecord r;
        r.ebn0_db = std::stod(fields[0]);
        r.ber_cd1 = std::stod(fields[1]);
        r.se_cd1 = std::stod(fields[2]);
        r.ber_1sid = std::stod(fields[3]);
        r.se_1sid = std::stod(fields[4]);
        r.ber_cd2 = std::stod(fields[5]);
        r.se_cd2 = std::stod(fields[6]);
        r.ber_2sid = std::stod(fields[7]);
        r.se_2sid = std::stod(fields[8]);
        r.sid_a_rate = std::stod(fields[9]);
        r.sid_b_rate = std::stod(fields[10]);
        r.trials = std::stoull(fields[11]);
        r.bits = std::stoull(fields[12]);
        records.push_back(r);
    }
    return records;
}

// ---- config file ----------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

inline std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string> parse_array(const std::string& s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw std::invalid_argument("config: expected an array, got " + s);
    std::vector<std::string> items;
    std::string item;
    std::istringstream is(s.substr(1, s.size() - 2));
    while (std::getline(is, item, ',')) {
        item = unquote(trim(item));
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

}  // namespace detail

// Assign one configuration key. Shared by the config-file loader and the CLI.
inline void apply_config_entry(SimConfig& cfg, const std::string& key, const std::string& value) {
    const std::string v = detail::unquote(detail::trim(value));
    try {
        if (key == "scheme") cfg.scheme = scheme_from_string(v);
        else if (key == "seed") cfg.seed = std::stoull(v);
        else if (key == "trials") cfg.trials = static_cast<std::uint32_t>(std::stoul(v));
        else if (key == "ebn0_start") cfg.sweep.start = std::stod(v);
        else if (key == "ebn0_stop") cfg.sweep.stop = std::stod(v);
        else if (key == "ebn0_step") cfg.sweep.step = std::stod(v);
        else if (key == "memory") cfg.code.memory = std::stoi(v);
        else if (key == "generators") {
            const auto items = detail::parse_array(v);
            if (items.size() != 2)
                throw std::invalid_argument("config: generators needs two octal strings");
            cfg.code.gen0 = static_cast<std::uint32_t>(std::stoul(items[0], nullptr, 8));
            cfg.code.gen1 = static_cast<std::uint32_t>(std::stoul(items[1], nullptr, 8));
        } else if (key == "termination") cfg.code.termination = (v == "true" || v == "1");
        else if (key == "msg_bits_a") cfg.msg_bits_a = static_cast<std::uint32_t>(std::stoul(v));
        else if (key == "tag_bits_a") cfg.tag_bits_a = static_cast<std::uint32_t>(std::stoul(v));
        else if (key == "msg_bits_b") cfg.msg_bits_b = static_cast<std::uint32_t>(std::stoul(v));
        else if (key == "tag_bits_b") cfg.tag_bits_b = static_cast<std::uint32_t>(std::stoul(v));
        else if (key == "flip_budget") cfg.sid.flip_budget = std::stoi(v);
        else if (key == "key_hex") cfg.key_hex = v;
        else if (key == "out") cfg.out_path = v;
        else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(v));
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad value for '" + key + "': " + value);
    }
}

// Key-value config file: `key = value` lines, '#' comments, quoted strings,
// generators as an array of octal strings, e.g. generators = ["7", "5"].
inline SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);
    SimConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("load_config: " + path + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        apply_config_entry(cfg, key, value);
    }
    return cfg;
}

}  // namespace sidlab
