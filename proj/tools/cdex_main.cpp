// Command-line front end: episode simulation, per-stage game analysis,
// Monte-Carlo sweeps, and the self-check suites.
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cdex/equilibrium.hpp"
#include "cdex/game.hpp"
#include "cdex/harness.hpp"
#include "cdex/learning.hpp"
#include "cdex/verify.hpp"

namespace {

using namespace cdex;

std::string profile_bits(std::uint64_t profile, int players) {
    std::string s(static_cast<std::size_t>(players), '0');
    for (int i = 0; i < players; ++i)
        if ((profile >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

std::string mask_list(std::uint64_t mask, int players) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < players; ++i) {
        if (!((mask >> i) & 1u)) continue;
        if (!first) s += ", ";
        s += std::to_string(i);
        first = false;
    }
    return s + "}";
}

std::string combo_bits(const PacketCombination& kappa, int packets) {
    std::string s(static_cast<std::size_t>(packets), '0');
    for (int j = 0; j < packets; ++j)
        if (kappa.test(static_cast<std::size_t>(j))) s[static_cast<std::size_t>(j)] = '1';
    return s;
}

int run_simulate(const ExperimentConfig& cfg, const std::string& snapshotPath, std::uint64_t index) {
    Session sess;
    if (!snapshotPath.empty()) {
        sess = snapshot_session(read_snapshot_file(snapshotPath), cfg.game, cfg.punishmentV);
        std::cout << "episode from snapshot " << snapshotPath << "\n";
    } else {
        validate_config(cfg);
        ErasureModel model = sample_erasure_model(cfg, index);
        Rng rngInit(stream_seed(cfg, index, StreamTag::init));
        SideInformationState s0 = run_init_phase(cfg.players, cfg.packets, model.q, rngInit);
        sess = make_session(s0, model, cfg.game, cfg.punishmentV);
        std::cout << "episode for iteration " << index << " (players=" << cfg.players
                  << ", packets=" << cfg.packets << ")\n";
    }

    ResolveOptions ropts;
    ropts.channel = cfg.channelAnalysis;
    ropts.liveness = cfg.liveness;
    ropts.singleSweep = cfg.singleSweep;
    Rng rng(stream_seed(cfg, index, StreamTag::cde));
    const int cap = cfg.slotCap < 0 ? 100 * sess.packets() : cfg.slotCap;

    int stages = 0;
    bool censored = false;
    while (!is_complete(sess.state)) {
        if (stages >= cap) {
            censored = true;
            break;
        }
        std::uint64_t profile = resolve_stage_action(sess, ropts);
        std::vector<PacketCombination> kappas = stage_kappas(sess);
        StageOutcome out = advance_stage(sess, profile, rng);
        stages += 1;

        std::cout << "stage " << (sess.ledger.stage - 1) << ": profile=" << profile_bits(profile, sess.players());
        for (int i = 0; i < sess.players(); ++i)
            if ((profile >> i) & 1u)
                std::cout << " kappa[" << i << "]=" << combo_bits(kappas[static_cast<std::size_t>(i)], sess.packets());
        std::cout << " decoded=";
        if (out.decodedBy.empty()) std::cout << "-";
        for (std::size_t k = 0; k < out.decodedBy.size(); ++k) {
            if (k) std::cout << ",";
            std::cout << "(" << out.decodedBy[k].first << ":" << out.decodedBy[k].second << ")";
        }
        std::cout << " delays=";
        for (int i = 0; i < sess.players(); ++i) {
            if (i) std::cout << ",";
            std::cout << sess.ledger.cumulativeDelay[static_cast<std::size_t>(i)];
        }
        std::cout << " cost=" << format_double(sess.ledger.lastCostCompletion) << "\n";
    }

    std::int64_t totalDelay = 0;
    for (std::int64_t d : sess.ledger.cumulativeDelay) totalDelay += d;
    std::vector<double> delays(static_cast<std::size_t>(sess.players()));
    for (int i = 0; i < sess.players(); ++i)
        delays[static_cast<std::size_t>(i)] =
            static_cast<double>(sess.ledger.cumulativeDelay[static_cast<std::size_t>(i)]);
    CompletionEstimate est =
        completion_estimate(sess.ledger.initialWants, delays, sess.model.average_erasure());
    double meanEst = 0.0;
    for (double c : est.perPlayer) meanEst += c;
    meanEst /= static_cast<double>(sess.players());

    std::cout << "T=" << stages << " mean_estimate=" << format_double(meanEst)
              << " total_delay=" << totalDelay << " censored=" << (censored ? 1 : 0) << "\n";
    return 0;
}

int run_analyze(const ExperimentConfig& cfg, const std::string& snapshotPath) {
    Session sess = snapshot_session(read_snapshot_file(snapshotPath), cfg.game, cfg.punishmentV);
    const int M = sess.players();
    StageContext ctx = make_stage_context(sess);
    StageAnalysis a = analyze_stage(sess, cfg.game);

    std::cout << "stage-game analysis (game " << (cfg.game == GameMode::game1 ? 1 : 2)
              << ", profile bits listed player 0 first)\n";
    std::cout << "  players:        " << M << "\n";
    std::cout << "  wanting:        " << mask_list(ctx.wantsMask, M) << "\n";
    std::cout << "  critical set:   " << mask_list(a.criticalSet, M)
              << (a.y0Defined ? "" : "  (empty: closed forms degenerate, silent profile optimal)") << "\n";
    std::cout << "  helper set:     " << mask_list(a.helperSet, M) << "\n";
    std::cout << "  cost_prev:      " << format_double(a.costPrev) << "\n";
    std::cout << "  y0:             " << format_double(a.y0) << "\n";
    std::cout << "  y per player:  ";
    for (double y : a.yPerPlayer) std::cout << " " << format_double(y);
    std::cout << "\n";
    std::cout << "  ne count:       " << a.neCount << "\n";
    if (!a.neProfiles.empty() && a.neProfiles.size() <= 64) {
        std::cout << "  ne profiles:   ";
        for (std::uint64_t p : a.neProfiles) std::cout << " " << profile_bits(p, M);
        std::cout << "\n";
    }
    std::cout << "  pone profile:   " << profile_bits(a.poneProfile, M) << "\n";
    std::cout << "  poa:            " << format_double(a.poa) << "\n";
    std::cout << "  poa lower bnd:  " << format_double(a.poaLowerBound) << "\n";

    if (cfg.channelAnalysis == ChannelMode::expected && M <= 16) {
        BruteForceResult bf = brute_force_ne(sess, cfg.game, ChannelMode::expected);
        std::cout << "  expected-mode enumeration: ne=";
        for (std::size_t k = 0; k < bf.ne.size(); ++k) {
            if (k) std::cout << ",";
            std::cout << profile_bits(bf.ne[k], M);
        }
        std::cout << " pone=";
        for (std::size_t k = 0; k < bf.pone.size(); ++k) {
            if (k) std::cout << ",";
            std::cout << profile_bits(bf.pone[k], M);
        }
        std::cout << "\n";
    }

    std::cout << stage_analysis_csv_header() << "\n" << stage_analysis_csv_row(a, M) << "\n";
    return 0;
}

int run_sweep_command(const ExperimentConfig& cfg, SweepVariable variable,
                      const std::vector<double>& grid, const std::string& outPath) {
    validate_config(cfg);
    SweepTable table = run_sweep(cfg, variable, grid);
    emit_outputs(table, outPath);
    std::cout << sweep_csv(table);
    std::cerr << "wrote " << outPath << "\n";
    return 0;
}

int run_verify(const ExperimentConfig& cfg, int statesPerPlayerCount) {
    CorpusReport corpus = run_equilibrium_corpus(cfg.masterSeed, statesPerPlayerCount);
    PotentialReport potential = run_potential_suite(cfg.masterSeed);
    std::cout << "equilibrium corpus (seed " << cfg.masterSeed << ")\n"
              << corpus_report_csv(corpus) << "\n"
              << "potential identity suite\n"
              << potential_report_csv(potential);
    if (!corpus.firstNeMismatch.empty())
        std::cout << "first ne mismatch: " << corpus.firstNeMismatch << "\n";
    if (!corpus.firstPoaMismatch.empty())
        std::cout << "first poa mismatch: " << corpus.firstPoaMismatch << "\n";
    if (!corpus.firstBoundViolation.empty())
        std::cout << "first bound violation: " << corpus.firstBoundViolation << "\n";
    if (!corpus.firstDominanceViolation.empty())
        std::cout << "first dominance violation: " << corpus.firstDominanceViolation << "\n";
    if (!corpus.firstPoneMiss.empty())
        std::cout << "first decision-rule miss: " << corpus.firstPoneMiss << "\n";
    if (!potential.firstViolation.empty())
        std::cout << "first potential violation: " << potential.firstViolation << "\n";

    bool ok = corpus.neMismatches == 0 && corpus.qEmptyNeMismatches == 0 &&
              corpus.poaMismatches == 0 && corpus.boundViolations == 0 &&
              corpus.dominanceViolations == 0 && corpus.poneMisses == 0 &&
              potential.violations == 0;
    std::cout << (ok ? "verify: all suites clean\n" : "verify: FAILURES above\n");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cooperative packet-recovery simulator and stage-game analyzer"};
    app.fallthrough();
    app.set_config("--config", "", "flat key=value configuration file (flags override)");
    app.require_subcommand(1);

    ExperimentConfig cfg;
    int gameFlag = 2;
    std::string channelMode = "expected";
    std::string liveness = "on";
    std::string outPath = "sweep.csv";

    app.add_option("--players", cfg.players, "number of players")->capture_default_str();
    app.add_option("--packets", cfg.packets, "frame size")->capture_default_str();
    app.add_option("--p-mean", cfg.pMean, "player-player erasure mean")->capture_default_str();
    app.add_option("--q-mean", cfg.qMean, "base-station erasure mean")->capture_default_str();
    app.add_option("--spread", cfg.spread, "half-width of the per-iteration erasure draw")
        ->capture_default_str();
    app.add_option("--punishment", cfg.punishmentV, "collision back-off window length")
        ->capture_default_str();
    app.add_option("--game", gameFlag, "utility flavour: 1 = completion only, 2 = with charges")
        ->check(CLI::IsMember({1, 2}))
        ->capture_default_str();
    app.add_option("--channel-mode", channelMode, "channel view for virtual decisions")
        ->check(CLI::IsMember({"realized", "deterministic", "expected"}))
        ->capture_default_str();
    app.add_option("--iterations", cfg.iterations, "episodes per grid point")->capture_default_str();
    app.add_option("--seed", cfg.masterSeed, "master seed")->capture_default_str();
    app.add_option("--out", outPath, "output CSV path (a .dat sibling is written next to it)")
        ->capture_default_str();
    app.add_option("--liveness", liveness, "all-silent deadlock override")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    app.add_flag("--single-sweep", cfg.singleSweep, "stop the best-response pass after one sweep");

    auto* sim = app.add_subcommand("simulate", "run one episode and print the stage trace");
    std::string simSnapshot;
    std::uint64_t simIndex = 0;
    sim->add_option("--snapshot", simSnapshot, "start from a state snapshot file");
    sim->add_option("--index", simIndex, "iteration index for the seed streams")->capture_default_str();

    auto* ana = app.add_subcommand("analyze-stage", "print the stage-game analysis of a snapshot");
    std::string anaSnapshot;
    ana->add_option("snapshot", anaSnapshot, "state snapshot file")->required();

    auto* sweepM = app.add_subcommand("sweep-m", "mean completion time versus player count");
    std::vector<double> gridM{20, 30, 40, 50, 60};
    sweepM->add_option("--grid", gridM, "player counts")->capture_default_str();

    auto* sweepR = app.add_subcommand("sweep-ratio", "mean completion time versus p/q erasure ratio");
    std::vector<double> gridR{0.1, 0.25, 0.5, 0.75, 1.0, 1.2};
    sweepR->add_option("--grid", gridR, "p-mean / q-mean ratios")->capture_default_str();

    auto* ver = app.add_subcommand("verify", "closed-form vs enumeration self-check suites");
    int verStates = 200;
    ver->add_option("--states", verStates, "random states per player count")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    cfg.game = gameFlag == 1 ? GameMode::game1 : GameMode::game2;
    cfg.channelAnalysis = channelMode == "realized"
                              ? ChannelMode::realized
                              : (channelMode == "deterministic" ? ChannelMode::deterministic
                                                                : ChannelMode::expected);
    cfg.liveness = liveness == "on";

    try {
        if (sim->parsed()) return run_simulate(cfg, simSnapshot, simIndex);
        if (ana->parsed()) return run_analyze(cfg, anaSnapshot);
        if (sweepM->parsed()) return run_sweep_command(cfg, SweepVariable::players, gridM, outPath);
        if (sweepR->parsed()) return run_sweep_command(cfg, SweepVariable::erasureRatio, gridR, outPath);
        if (ver->parsed()) return run_verify(cfg, verStates);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
