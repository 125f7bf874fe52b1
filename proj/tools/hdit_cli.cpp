// Command-line surface for the independence-test library: run tests on
// CSV data, run size/power simulations, emit null-distribution
// histograms and exact-moment oracle checks.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdit/hdit.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

hdit::StatName parse_method(const std::string& token) {
  static const std::map<std::string, hdit::StatName> lookup = {
      {"bartlett", hdit::StatName::bartlett},
      {"chisq", hdit::StatName::bartlett},
      {"t0", hdit::StatName::clt_T0},
      {"clt", hdit::StatName::clt_T0},
      {"clt_t0", hdit::StatName::clt_T0},
      {"t1", hdit::StatName::clt_T1},
      {"clt_t1", hdit::StatName::clt_T1},
      {"alrt", hdit::StatName::alrt_Zn},
      {"zn", hdit::StatName::alrt_Zn},
      {"alrt_zn", hdit::StatName::alrt_Zn},
      {"logchi", hdit::StatName::logchi},
      {"t2", hdit::StatName::trace_T2},
      {"trace_t2", hdit::StatName::trace_T2},
      {"t3", hdit::StatName::trace_T3},
      {"trace_t3", hdit::StatName::trace_T3},
  };
  std::string key;
  for (char ch : token) key += static_cast<char>(std::tolower(ch));
  const auto it = lookup.find(key);
  if (it == lookup.end()) {
    throw hdit::PartitionError("unknown method '" + token + "'");
  }
  return it->second;
}

std::vector<hdit::StatName> parse_methods(const std::vector<std::string>& toks) {
  std::vector<hdit::StatName> out;
  for (const auto& t : toks) {
    std::string piece;
    std::istringstream is(t);
    while (std::getline(is, piece, ',')) {
      if (!piece.empty()) out.push_back(parse_method(piece));
    }
  }
  if (out.empty()) throw hdit::PartitionError("no methods requested");
  return out;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::invalid_argument("cannot open output file " + path);
  return file;
}

int cmd_test(const std::string& data_path, const std::string& groups,
             const std::vector<std::string>& methods, double alpha,
             bool header) {
  const hdit::Matrix data = hdit::read_csv_matrix(data_path, header);
  const hdit::GroupPartition part = hdit::parse_partition(groups);
  if (part.p != data.cols()) {
    throw hdit::PartitionError(
        "partition sums to " + std::to_string(part.p) + " but data has " +
        std::to_string(data.cols()) + " columns");
  }
  const hdit::NullLawSpec spec(static_cast<int>(data.rows()), part);
  const auto stats = parse_methods(methods);
  const hdit::Matrix a = hdit::scatter(data);
  double lrt = 0.0;
  bool have_lrt = false;
  for (auto name : stats) {
    hdit::StatisticReport report{};
    if (name == hdit::StatName::trace_T2) {
      report = hdit::trace_T2(a, spec);
    } else if (name == hdit::StatName::trace_T3) {
      report = hdit::trace_T3(a, spec);
    } else {
      if (!have_lrt) {
        lrt = hdit::neg2_log_lambda(a, part, spec.n);
        have_lrt = true;
      }
      switch (name) {
        case hdit::StatName::bartlett: report = hdit::bartlett_test(lrt, spec); break;
        case hdit::StatName::clt_T0: report = hdit::clt_T0(lrt, spec); break;
        case hdit::StatName::clt_T1: report = hdit::clt_T1(lrt, spec); break;
        case hdit::StatName::alrt_Zn: report = hdit::alrt_Zn(lrt, spec); break;
        case hdit::StatName::logchi: report = hdit::logchi_test(lrt, spec); break;
        default: break;
      }
    }
    nlohmann::json j = report.to_json();
    j["reject_at_alpha"] = report.reject_at(alpha);
    j["alpha"] = alpha;
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& model_name, const std::string& groups,
                 int n, double c, int reps, double alpha, std::uint64_t seed,
                 const std::vector<std::string>& methods,
                 const std::string& out_path) {
  hdit::SimModel model;
  if (model_name == "null" || model_name == "null_gaussian") {
    model = hdit::SimModel::null_gaussian;
  } else if (model_name == "model1" || model_name == "1") {
    model = hdit::SimModel::model1;
  } else if (model_name == "model2" || model_name == "2") {
    model = hdit::SimModel::model2;
  } else {
    throw hdit::PartitionError("unknown model '" + model_name + "'");
  }
  const hdit::GroupPartition part = hdit::parse_partition(groups);
  hdit::SimConfig config(model, c, hdit::NullLawSpec(n, part), reps, seed,
                         alpha, parse_methods(methods));
  const auto row = hdit::estimate_size_power(config);

  std::ofstream file;
  std::ostream& os = open_out(file, out_path);
  os << "model,q1,q2,n,c,alpha,method,reject_rate,se,reps,seed\n";
  const std::string q1 = std::to_string(part.q[0]);
  const std::string q2 = part.k >= 2 ? std::to_string(part.q[1]) : "";
  for (auto name : config.methods) {
    os << hdit::model_str(model) << ',' << q1 << ',' << q2 << ',' << n << ','
       << c << ',' << alpha << ',' << hdit::stat_name_str(name) << ','
       << row.reject_rate.at(name) << ',' << row.se.at(name) << ',' << reps
       << ',' << seed << "\n";
  }
  return 0;
}

int cmd_nulldist(const std::string& groups, int n, const std::string& stat,
                 int reps, int bins, bool fast, std::uint64_t seed,
                 const std::string& out_path) {
  const hdit::StatName name = parse_method(stat);
  const hdit::GroupPartition part = hdit::parse_partition(groups);
  hdit::SimConfig config(hdit::SimModel::null_gaussian, 0.0,
                         hdit::NullLawSpec(n, part), reps, seed, 0.05, {name});
  const auto hist = hdit::null_histogram(config, name, bins, fast);

  std::ofstream file;
  std::ostream& os = open_out(file, out_path);
  os << "kind,x_left,x_right,density\n";
  for (std::size_t b = 0; b + 1 < hist.edges.size(); ++b) {
    os << "bin," << hist.edges[b] << ',' << hist.edges[b + 1] << ','
       << hist.density[b] << "\n";
  }
  for (const auto& [x, d] : hist.curve) {
    os << "curve," << x << ",," << d << "\n";
  }
  return 0;
}

int cmd_oracle(int n, const std::string& groups, double h,
               std::optional<int> compare_reps, std::uint64_t seed) {
  const hdit::NullLawSpec spec(n, hdit::parse_partition(groups));
  const double log_moment = hdit::exact_log_moment(spec, h);
  nlohmann::json j = {{"n", n},
                      {"groups", spec.partition.to_string()},
                      {"h", h},
                      {"log_moment", log_moment}};
  if (compare_reps) {
    hdit::Rng rng(seed);
    const int reps = *compare_reps;
    double mean = 0.0, sq = 0.0;
    for (int i = 0; i < reps; ++i) {
      const double w = std::exp(h * hdit::sample_log_W(spec, rng));
      const double delta = w - mean;
      mean += delta / (i + 1);
      sq += delta * (w - mean);
    }
    const double se = std::sqrt(sq / (reps - 1.0) / reps);
    const double z = (mean - std::exp(log_moment)) / se;
    j["mc_mean"] = mean;
    j["mc_se"] = se;
    j["z"] = z;
    j["reps"] = reps;
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Likelihood-ratio independence tests for normal sub-vectors"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);

  // test
  auto* test = app.add_subcommand("test", "run tests on a CSV data matrix");
  std::string data_path, groups;
  std::vector<std::string> methods{"alrt"};
  double alpha = 0.05;
  bool header = false;
  test->add_option("--data", data_path, "CSV file, n rows x p columns")
      ->required();
  test->add_option("--groups", groups, "partition q1,q2,...,qk")->required();
  test->add_option("--method,--methods", methods, "statistics to compute");
  test->add_option("--alpha", alpha, "nominal level");
  test->add_flag("--header", header, "first CSV row is a header");

  // simulate
  auto* sim = app.add_subcommand("simulate", "size/power Monte Carlo table");
  std::string model = "model1", sim_groups, sim_out;
  int sim_n = 0, sim_reps = 10000;
  double sim_c = 0.0, sim_alpha = 0.05;
  std::uint64_t sim_seed = 1;
  std::vector<std::string> sim_methods{"alrt", "t2", "t3"};
  sim->add_option("--model", model, "null | model1 | model2");
  sim->add_option("--groups", sim_groups, "partition q1,q2")->required();
  sim->add_option("--n", sim_n, "sample size")->required();
  sim->add_option("--c", sim_c, "effect size (0 = size study)");
  sim->add_option("--reps", sim_reps, "replicates");
  sim->add_option("--alpha", sim_alpha, "nominal level");
  sim->add_option("--seed", sim_seed, "base RNG seed");
  sim->add_option("--methods", sim_methods, "statistics to compare");
  sim->add_option("--out", sim_out, "output CSV path (default stdout)");

  // nulldist
  auto* nd = app.add_subcommand("nulldist", "null histogram with overlay");
  std::string nd_groups, nd_stat, nd_out;
  int nd_n = 0, nd_reps = 10000, nd_bins = 60;
  bool nd_fast = false;
  std::uint64_t nd_seed = 1;
  nd->add_option("--groups", nd_groups, "partition q1,...,qk")->required();
  nd->add_option("--n", nd_n, "sample size")->required();
  nd->add_option("--stat", nd_stat, "bartlett | t0 | alrt | logchi")
      ->required();
  nd->add_option("--reps", nd_reps, "replicates");
  nd->add_option("--bins", nd_bins, "histogram bins");
  nd->add_flag("--fast", nd_fast, "use the beta-product null sampler");
  nd->add_option("--seed", nd_seed, "base RNG seed");
  nd->add_option("--out", nd_out, "output CSV path (default stdout)");

  // oracle
  auto* orc = app.add_subcommand("oracle", "exact log-moment of W_n");
  orc->set_help_flag("--help", "print help and exit");  // frees --h
  std::string orc_groups;
  int orc_n = 0;
  double orc_h = 0.0;
  std::optional<int> orc_compare;
  int orc_compare_raw = 0;
  std::uint64_t orc_seed = 1;
  orc->add_option("--n", orc_n, "sample size")->required();
  orc->add_option("--groups", orc_groups, "partition q1,...,qk")->required();
  orc->add_option("--h", orc_h, "moment exponent")->required();
  auto* cmp = orc->add_option("--compare", orc_compare_raw,
                              "Monte Carlo replicates for cross-check");
  orc->add_option("--seed", orc_seed, "RNG seed for --compare");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*test) {
      return cmd_test(data_path, groups, methods, alpha, header);
    }
    if (*sim) {
      return cmd_simulate(model, sim_groups, sim_n, sim_c, sim_reps, sim_alpha,
                          sim_seed, sim_methods, sim_out);
    }
    if (*nd) {
      return cmd_nulldist(nd_groups, nd_n, nd_stat, nd_reps, nd_bins, nd_fast,
                          nd_seed, nd_out);
    }
    if (*orc) {
      if (cmp->count()) orc_compare = orc_compare_raw;
      return cmd_oracle(orc_n, orc_groups, orc_h, orc_compare, orc_seed);
    }
  } catch (const hdit::FactorizationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const hdit::DegenerateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
