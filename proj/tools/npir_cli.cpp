#include <cstdarg>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "npir/bounds.hpp"
#include "npir/channels.hpp"
#include "npir/engine.hpp"
#include "npir/macpir.hpp"
#include "npir/privacy.hpp"
#include "npir/scheme.hpp"

namespace {

using namespace npir;

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

GroupSequence parse_seq(const std::string& text) {
  GroupSequence seq;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    seq.n.push_back(std::stoi(tok, &used));
    if (used != tok.size()) throw std::invalid_argument("bad sequence entry: " + tok);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return seq;
}

std::vector<long long> parse_int_list(const std::string& text) {
  std::vector<long long> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(std::stoll(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct Opts {
  std::uint64_t seed = kDefaultSeed;
  std::string out = "table";
  bool quiet = false;
};

CapacityVector capacities_of(const std::vector<PointChannel>& chans) {
  std::vector<double> c;
  c.reserve(chans.size());
  for (const auto& ch : chans) c.push_back(ch.capacity);
  return CapacityVector(c);
}

std::string int_list(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

int print_bound(const Opts& g, double value, const std::vector<double>* tau,
                const std::vector<int>* seq, const char* seq_label) {
  if (g.out == "json") {
    nlohmann::json j;
    j["value"] = value;
    if (tau) j["tau"] = *tau;
    if (seq) j[seq_label] = int_list(*seq);
    std::cout << j.dump() << "\n";
    return 0;
  }
  if (g.out == "csv") {
    std::cout << "value\n" << fmt("%.15g", value) << "\n";
    return 0;
  }
  std::cout << "value " << fmt("%.15g", value) << "\n";
  if (g.quiet) return 0;
  if (tau) {
    std::cout << "tau ";
    for (std::size_t i = 0; i < tau->size(); ++i) std::cout << (i ? "," : "") << fmt("%.15g", (*tau)[i]);
    std::cout << "\n";
  }
  if (seq) std::cout << seq_label << " " << int_list(*seq) << "\n";
  return 0;
}

int emit_report(const SessionReport& rep, long long fail_threshold) {
  std::cout << rep.to_json() << "\n";
  if (fail_threshold >= 0 && rep.decode_failures > fail_threshold) return 3;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"private information retrieval over noisy channels: bounds, plans, simulation"};
  app.require_subcommand(1);
  app.fallthrough();  // global --seed/--out/--quiet may follow the subcommand

  Opts g;
  app.add_option("--seed", g.seed, "seed for all randomized steps");
  app.add_option("--out", g.out, "output format")->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_flag("--quiet", g.quiet, "result lines only");

  std::function<int()> action;

  // ---- bound ----------------------------------------------------------
  auto* bound = app.add_subcommand("bound", "capacity bounds at given channel capacities");
  bound->require_subcommand(1);
  struct {
    int M = 2, N = 0;
    std::string channels;
  } bo;
  for (const char* name : {"upper", "lower", "m2", "m3"}) {
    auto* sub = bound->add_subcommand(name, "");
    if (std::string(name) == "upper" || std::string(name) == "lower")
      sub->add_option("--M", bo.M, "number of messages")->required();
    sub->add_option("--N", bo.N, "number of databases (defaults to the channel count)");
    sub->add_option("--channels", bo.channels, "comma list, e.g. bsc:0.1,bec:0.3")->required();
    std::string kind = name;
    sub->callback([&, kind] {
      action = [&, kind]() -> int {
        auto chans = parse_point_channel_list(bo.channels);
        if (bo.N == 0) bo.N = static_cast<int>(chans.size());
        if (bo.N != static_cast<int>(chans.size())) throw std::invalid_argument("--N disagrees with --channels");
        CapacityVector C = capacities_of(chans);
        if (kind == "upper") {
          UpperBoundResult r = upper_bound(bo.M, bo.N, C);
          return print_bound(g, r.value, &r.tau.tau, &r.binding_seq, "binding_seq");
        }
        if (kind == "lower") {
          LowerBoundResult r = lower_bound(bo.M, bo.N, C);
          return print_bound(g, r.value, nullptr, &r.seq.n, "seq");
        }
        if (kind == "m2") return print_bound(g, corner_capacity_m2(bo.N, C), nullptr, nullptr, "");
        return print_bound(g, corner_capacity_m3(bo.N, C), nullptr, nullptr, "");
      };
    });
  }

  // ---- plan -----------------------------------------------------------
  auto* plan_cmd = app.add_subcommand("plan", "print the query table for a corner point");
  struct {
    int M = 0, N = 0, desired = 1;
    long long nu = 1;
    std::string seq;
    bool shuffled = false;
  } po;
  plan_cmd->add_option("--M", po.M, "number of messages")->required();
  plan_cmd->add_option("--N", po.N, "number of databases")->required();
  plan_cmd->add_option("--seq", po.seq, "group sequence, e.g. 1,2,2")->required();
  plan_cmd->add_option("--desired", po.desired, "desired message (1-based)");
  plan_cmd->add_option("--nu", po.nu, "blocks");
  plan_cmd->add_flag("--shuffled", po.shuffled, "apply the seeded permutations and shuffle");
  plan_cmd->callback([&] {
    action = [&]() -> int {
      GroupSequence seq = parse_seq(po.seq);
      if (po.desired < 1 || po.desired > po.M) throw std::invalid_argument("desired index out of range");
      if (po.shuffled) {
        RngStream rng(g.seed);
        auto [plan, recon] = synthesize_query_plan(po.M, po.N, seq, po.desired - 1, po.nu, rng);
        (void)recon;
        std::cout << format_query_plan(plan);
      } else {
        auto [plan, recon] = synthesize_query_plan_identity(po.M, po.N, seq, po.desired - 1, po.nu);
        (void)recon;
        std::cout << format_query_plan(plan);
      }
      return 0;
    };
  });

  // ---- simulate -------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "run one retrieval session, print the report as JSON");
  sim->require_subcommand(1);
  struct {
    int M = 0, N = 0, desired = 1, L = 16;
    long long nu = 1, fail_threshold = -1;
    double margin = 0.1, p = 0.05;
    std::string channels, seq = "auto";
    bool per_use = false;
  } so;

  auto* sim_npir = sim->add_subcommand("npir", "replicated databases over point channels");
  sim_npir->add_option("--M", so.M, "number of messages")->required();
  sim_npir->add_option("--N", so.N, "number of databases")->required();
  sim_npir->add_option("--channels", so.channels, "per-database channels")->required();
  sim_npir->add_option("--seq", so.seq, "group sequence or 'auto'");
  sim_npir->add_option("--nu", so.nu, "blocks");
  sim_npir->add_option("--desired", so.desired, "desired message (1-based)");
  sim_npir->add_option("--margin", so.margin, "rate backoff");
  sim_npir->add_option("--fail-threshold", so.fail_threshold, "exit 3 when decode failures exceed this");
  sim_npir->callback([&] {
    action = [&]() -> int {
      SessionConfig cfg;
      cfg.M = so.M;
      cfg.N = so.N;
      cfg.channels = parse_point_channel_list(so.channels);
      cfg.nu = so.nu;
      cfg.margin = so.margin;
      cfg.seed = g.seed;
      if (so.seq == "auto") {
        cfg.auto_seq = true;
      } else {
        cfg.auto_seq = false;
        cfg.seq = parse_seq(so.seq);
      }
      GroupSequence seq = cfg.auto_seq ? lower_bound(cfg.M, cfg.N, capacities_of(cfg.channels)).seq : cfg.seq;
      long long Lstar = corner_point(seq, cfg.M).Lstar;
      RngStream store_rng = RngStream(g.seed).split(777);
      MessageStore store = MessageStore::random(cfg.M, static_cast<int>(cfg.nu * Lstar), store_rng);
      return emit_report(run_npir_session(cfg, store, so.desired), so.fail_threshold);
    };
  });

  auto add_mac_common = [&](CLI::App* sub) {
    sub->add_option("--M", so.M, "number of messages")->required();
    sub->add_option("--L", so.L, "bits per message");
    sub->add_option("--desired", so.desired, "desired message (1-based)");
    sub->add_option("--fail-threshold", so.fail_threshold, "exit 3 when decode failures exceed this");
  };

  auto* sim_add = sim->add_subcommand("mac-add", "additive multiple-access channel");
  add_mac_common(sim_add);
  sim_add->add_option("--p", so.p, "additive noise level");
  sim_add->add_option("--margin", so.margin, "rate backoff");
  sim_add->callback([&] {
    action = [&]() -> int {
      RngStream store_rng = RngStream(g.seed).split(777);
      MessageStore store = MessageStore::random(so.M, so.L, store_rng);
      RngStream rng(g.seed);
      if (sim_add->count("--margin") == 0) so.margin = 0.2;
      return emit_report(additive_mac_retrieve(store, so.desired, so.p, so.L, so.margin, rng),
                         so.fail_threshold);
    };
  });

  for (const char* name : {"mac-and", "mac-or"}) {
    auto* sub = sim->add_subcommand(name, "boolean multiple-access channel");
    add_mac_common(sub);
    bool is_or = std::string(name) == "mac-or";
    sub->callback([&, is_or] {
      action = [&, is_or]() -> int {
        RngStream store_rng = RngStream(g.seed).split(777);
        MessageStore store = MessageStore::random(so.M, so.L, store_rng);
        RngStream rng(g.seed);
        BooleanRetrieval r = is_or ? disjunction_retrieve(store, so.desired, so.M, rng)
                                   : conjunction_retrieve(store, so.desired, so.M, rng);
        if (!g.quiet)
          for (std::size_t n = 0; n < r.expressions.size(); ++n)
            std::cerr << "DB " << (n + 1) << ": " << r.expressions[n] << "\n";
        return emit_report(r.report, so.fail_threshold);
      };
    });
  }

  auto* sim_sel = sim->add_subcommand("mac-sel", "selection multiple-access channel");
  add_mac_common(sim_sel);
  sim_sel->add_flag("--per-use", so.per_use, "print the per-use capacity instead of simulating");
  sim_sel->callback([&] {
    action = [&]() -> int {
      if (so.per_use) {
        std::cout << fmt("%.15g", selection_capacity(so.M, 2, SelectionVariant::PER_USE)) << "\n";
        return 0;
      }
      RngStream store_rng = RngStream(g.seed).split(777);
      MessageStore store = MessageStore::random(so.M, so.L, store_rng);
      RngStream rng(g.seed);
      return emit_report(selection_fixed_retrieve(store, so.desired, rng, nullptr), so.fail_threshold);
    };
  });

  // ---- sweep ----------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "figure data as CSV");
  sweep->require_subcommand(1);
  struct {
    double grid = 0.01;
    int M = 0, N = 0, trials = 200;
    double margin = 0.1;
    std::string channels, nu = "4,16,64", seq = "auto";
  } wo;

  for (const char* name : {"region", "capacity"}) {
    auto* sub = sweep->add_subcommand(name, "two-database three-message grid");
    sub->add_option("--grid", wo.grid, "grid step over [0, 0.5]");
    bool is_region = std::string(name) == "region";
    sub->callback([&, is_region] {
      action = [&, is_region]() -> int {
        std::cout << (is_region ? "p1,p2,region\n" : "p1,p2,capacity\n");
        int steps = static_cast<int>(0.5 / wo.grid + 1e-9);
        for (int i = 0; i <= steps; ++i)
          for (int j = i; j <= steps; ++j) {  // contract requires p1 <= p2
            double p1 = i * wo.grid, p2 = j * wo.grid;
            if (is_region)
              std::cout << fmt("%.6g,%.6g,%s", p1, p2, to_string(bsc_m3n2_region(p1, p2)).c_str()) << "\n";
            else
              std::cout << fmt("%.6g,%.6g,%.12g", p1, p2, bsc_m3n2_capacity(p1, p2)) << "\n";
          }
        return 0;
      };
    });
  }

  auto* sweep_len = sweep->add_subcommand("blocklength", "decode success vs block count");
  sweep_len->add_option("--M", wo.M, "number of messages")->required();
  sweep_len->add_option("--N", wo.N, "number of databases")->required();
  sweep_len->add_option("--channels", wo.channels, "per-database channels")->required();
  sweep_len->add_option("--nu", wo.nu, "comma list of block counts");
  sweep_len->add_option("--trials", wo.trials, "sessions per block count");
  sweep_len->add_option("--margin", wo.margin, "rate backoff");
  sweep_len->add_option("--seq", wo.seq, "group sequence or 'auto'");
  sweep_len->callback([&] {
    action = [&]() -> int {
      SessionConfig cfg;
      cfg.M = wo.M;
      cfg.N = wo.N;
      cfg.channels = parse_point_channel_list(wo.channels);
      cfg.margin = wo.margin;
      cfg.seed = g.seed;
      if (wo.seq == "auto") {
        cfg.auto_seq = true;
      } else {
        cfg.auto_seq = false;
        cfg.seq = parse_seq(wo.seq);
      }
      std::cout << "nu,success_rate,empirical_rate\n";
      for (const SweepRow& row : sweep_rate_vs_blocklength(cfg, parse_int_list(wo.nu), wo.trials))
        std::cout << fmt("%lld,%.6g,%.12g", row.nu, row.success_rate, row.empirical_rate) << "\n";
      return 0;
    };
  });

  // ---- verify ---------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "exact privacy verification");
  auto* vp = verify->add_subcommand("privacy", "query distributions must not depend on the desired index");
  struct {
    std::string protocol;
    int M = 3, N = 2;
    std::string seq;
  } vo;
  vp->add_option("--protocol", vo.protocol, "scheme|additive|conjunction|disjunction|selection|broken-demo")
      ->required()
      ->check(CLI::IsMember({"scheme", "additive", "conjunction", "disjunction", "selection", "broken-demo"}));
  vp->add_option("--M", vo.M, "number of messages");
  vp->add_option("--N", vo.N, "number of databases");
  vp->add_option("--seq", vo.seq, "check only this group sequence");
  vp->callback([&] {
    action = [&]() -> int {
      Rational worst = 0;
      auto pairwise_max = [&](auto&& dist_of, int dbs) {
        for (int db = 1; db <= dbs; ++db)
          for (int i = 0; i < vo.M; ++i)
            for (int j = i + 1; j < vo.M; ++j) {
              QueryDistribution di = dist_of(i, db), dj = dist_of(j, db);
              Rational tv = total_variation(di, dj);
              if (tv > worst) worst = tv;
            }
      };

      if (vo.protocol == "scheme") {
        std::vector<GroupSequence> seqs =
            vo.seq.empty() ? enumerate_group_sequences(vo.M, vo.N) : std::vector<GroupSequence>{parse_seq(vo.seq)};
        for (const auto& s : seqs) {
          Rational tv = scheme_privacy_tv_max(vo.M, vo.N, s);
          if (!g.quiet) std::cout << "seq " << s.to_string() << " tv " << tv.str() << "\n";
          if (tv > worst) worst = tv;
        }
      } else if (vo.protocol == "additive") {
        pairwise_max([&](int i, int db) { return additive_query_distribution(vo.M, i, db); }, 2);
      } else if (vo.protocol == "conjunction" || vo.protocol == "disjunction") {
        bool disj = vo.protocol == "disjunction";
        pairwise_max([&](int i, int db) { return boolean_query_distribution(vo.M, i, db, disj); },
                     1 << (vo.M - 1));
      } else if (vo.protocol == "selection") {
        pairwise_max([&](int i, int db) { (void)db; return selection_query_distribution(vo.M, i); }, 1);
      } else {  // broken-demo
        pairwise_max([&](int i, int db) { (void)db; return broken_demo_query_distribution(vo.M, i); }, 1);
      }

      bool pass = worst == 0;
      std::cout << (pass ? "PASS" : "FAIL") << " max_tv " << worst.str() << "\n";
      return pass ? 0 : 2;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    return action ? action() : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
