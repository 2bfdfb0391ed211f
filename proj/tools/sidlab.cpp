// sidlab — BER staging experiments for soft input decryption.
//
//   sidlab sweep --config run.cfg [--scheme S] [--ebno A:B:STEP] [--trials N]
//                [--seed K] [--flip-budget D] [--out PATH] [--threads T]
//   sidlab gain  --ref ref.csv --test test.csv --target-ber 1e-4
//                [--ref-col ber_cd1] [--test-col ber_2sid]

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sidlab/sidlab.hpp"

namespace {

std::string parse_ebno_range(const std::string& text, sidlab::SweepSpec& sweep) {
    double a = 0, b = 0, s = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &s) != 3)
        return "expected A:B:STEP, got '" + text + "'";
    sweep.start = a;
    sweep.stop = b;
    sweep.step = s;
    return "";
}

int run_sweep(const sidlab::SimConfig& cfg) {
    cfg.validate();
    const auto points = cfg.sweep.points();
    std::vector<sidlab::BERRecord> records;
    records.reserve(points.size());
    for (double ebn0 : points) {
        records.push_back(sidlab::simulate_point(cfg, ebn0));
        const auto& r = records.back();
        std::fprintf(stderr, "ebn0=%.3g dB  ber_cd1=%.4g  ber_1sid=%.4g  ber_cd2=%.4g  ber_2sid=%.4g  sid_a=%.3f sid_b=%.3f\n",
                     r.ebn0_db, r.ber_cd1, r.ber_1sid, r.ber_cd2, r.ber_2sid, r.sid_a_rate,
                     r.sid_b_rate);
    }
    sidlab::emit_csv(records, {}, cfg, cfg.out_path);
    std::cout << "wrote " << cfg.out_path << " (" << records.size() << " points, scheme "
              << sidlab::to_string(cfg.scheme) << ")\n";
    std::cout << "wrote " << cfg.out_path << ".manifest\n";
    return 0;
}

int run_gain(const std::string& ref_path, const std::string& test_path, double target_ber,
             const std::string& ref_col, const std::string& test_col) {
    const auto ref_records = sidlab::parse_csv(ref_path);
    const auto test_records = sidlab::parse_csv(test_path);
    const auto ref_curve = sidlab::extract_curve(ref_records, ref_col, ref_path + ":" + ref_col);
    const auto test_curve =
        sidlab::extract_curve(test_records, test_col, test_path + ":" + test_col);
    const auto g = sidlab::coding_gain(ref_curve, test_curve, target_ber);
    std::cout << "ref=" << g.reference_id << " test=" << g.test_id
              << " target_ber=" << g.target_ber << " ref_ebn0_db=" << g.reference_ebn0_db
              << " test_ebn0_db=" << g.test_ebn0_db << " gain_db=" << g.gain_db << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"soft input decryption staging experiments"};
    app.require_subcommand(1);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a BER sweep and write CSV + manifest");
    std::string config_path, ebno_text, scheme_text, out_path;
    std::uint64_t seed = 0;
    std::uint32_t trials = 0;
    int flip_budget = -1;
    unsigned threads = 0;
    auto* config_opt = sweep_cmd->add_option("--config", config_path, "config file (key = value)")
                           ->check(CLI::ExistingFile);
    auto* scheme_opt = sweep_cmd->add_option("--scheme", scheme_text,
                                             "baseline|feedback|serial|parallel");
    auto* ebno_opt = sweep_cmd->add_option("--ebno", ebno_text, "sweep range A:B:STEP in dB");
    auto* trials_opt = sweep_cmd->add_option("--trials", trials, "trials per sweep point");
    auto* seed_opt = sweep_cmd->add_option("--seed", seed, "run seed");
    auto* budget_opt = sweep_cmd->add_option("--flip-budget", flip_budget,
                                             "number of lowest-|L| bits eligible for flipping");
    auto* out_opt = sweep_cmd->add_option("--out", out_path, "output CSV path");
    sweep_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");

    // gain
    auto* gain_cmd = app.add_subcommand("gain", "coding gain between two sweep CSVs");
    std::string ref_path, test_path, ref_col = "ber_cd1", test_col = "ber_2sid";
    double target_ber = 0.0;
    gain_cmd->add_option("--ref", ref_path, "reference curve CSV")
        ->required()
        ->check(CLI::ExistingFile);
    gain_cmd->add_option("--test", test_path, "test curve CSV")
        ->required()
        ->check(CLI::ExistingFile);
    gain_cmd->add_option("--target-ber", target_ber, "BER at which the gain is read")->required();
    gain_cmd->add_option("--ref-col", ref_col, "reference BER column (default ber_cd1)");
    gain_cmd->add_option("--test-col", test_col, "test BER column (default ber_2sid)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep_cmd->parsed()) {
            sidlab::SimConfig cfg;
            if (config_opt->count() > 0) cfg = sidlab::load_config(config_path);
            if (scheme_opt->count() > 0) cfg.scheme = sidlab::scheme_from_string(scheme_text);
            if (ebno_opt->count() > 0) {
                if (const auto err = parse_ebno_range(ebno_text, cfg.sweep); !err.empty()) {
                    std::cerr << "error: --ebno " << err << "\n";
                    return 1;
                }
            }
            if (trials_opt->count() > 0) cfg.trials = trials;
            if (seed_opt->count() > 0) cfg.seed = seed;
            if (budget_opt->count() > 0) cfg.sid.flip_budget = flip_budget;
            if (out_opt->count() > 0) cfg.out_path = out_path;
            if (threads != 0) cfg.threads = threads;
            return run_sweep(cfg);
        }
        return run_gain(ref_path, test_path, target_ber, ref_col, test_col);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
