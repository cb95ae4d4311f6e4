#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blockdet/advisor.hpp"
#include "blockdet/blockcompute.hpp"
#include "blockdet/blocks.hpp"
#include "blockdet/bpartition.hpp"
#include "blockdet/error.hpp"
#include "blockdet/generator.hpp"
#include "blockdet/io.hpp"
#include "blockdet/kernels.hpp"

namespace blockdet::cli {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct RunConfig {
  std::string input;
  std::string format = "auto";
  std::string mode = "exact";
  std::string method = "auto";
  std::string output;
  double epsilon = kDefaultEpsilon;
  std::uint64_t seed = 1;
  std::size_t ryser_cap = kRyserDefaultCap;
  bool verbose = false;
};

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Matrix<Rational> load(const RunConfig& cfg) {
  MatrixFormat f = guess_format(cfg.input);
  if (cfg.format != "auto") {
    auto named = format_from_name(cfg.format);
    if (!named) throw std::invalid_argument("unknown format '" + cfg.format + "'");
    f = *named;
  }
  return parse_matrix(cfg.input, f);
}

Json ids(const VertexSet& s) { return Json(s.ids()); }

Json parts_json(const std::vector<VertexSet>& parts) {
  Json out = Json::array();
  for (const auto& p : parts) out.push_back(ids(p));
  return out;
}

// Assignments are printed with 1-based block numbers.
Json assignment_json(const Assignment& a) {
  Json out = Json::array();
  for (auto b : a) out.push_back(b + 1);
  return out;
}

Json decomposition_json(const BlockDecomposition& d) {
  Json j;
  j["n"] = d.vertices.size();
  Json blocks = Json::array();
  for (const auto& b : d.blocks) blocks.push_back(ids(b));
  j["blocks"] = blocks;
  j["cut_vertices"] = d.cut_vertices;
  Json indices = Json::array(), membership = Json::array();
  for (std::size_t i = 0; i < d.cut_count(); ++i) {
    indices.push_back(d.cut_index(i));
    Json holders = Json::array();
    for (auto b : d.membership[i]) holders.push_back(b + 1);
    membership.push_back(holders);
  }
  j["cut_indices"] = indices;
  j["membership"] = membership;
  Json counts = Json::array();
  for (std::size_t b = 0; b < d.block_count(); ++b) counts.push_back(d.block_cut_count(b));
  j["block_cut_counts"] = counts;
  Json components = Json::array();
  for (const auto& c : d.components) components.push_back(ids(c));
  j["components"] = components;
  return j;
}

Json size_identity_json(const BlockDecomposition& d) {
  Json per_component = Json::array();
  std::vector<std::size_t> sum(d.components.size(), 1);
  for (std::size_t b = 0; b < d.block_count(); ++b) sum[d.block_component[b]] += d.blocks[b].size() - 1;
  for (std::size_t c = 0; c < d.components.size(); ++c)
    per_component.push_back(Json{{"size", d.components[c].size()}, {"block_sum", sum[c]}});
  return Json{{"holds", size_identity_holds(d)}, {"per_component", per_component}};
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot write '" + cfg.output + "'");
  file << text;
}

void emit(const RunConfig& cfg, std::ostream& out, const Json& j) { emit(cfg, out, j.dump(2) + "\n"); }

// ---- det / per ---------------------------------------------------------------

struct Evaluation {
  std::string value;
  Method method = Method::dense;
  BlockwiseStats stats;
};

template <class T>
std::string show(const T& v) {
  return to_string(v);
}

template <class T>
Evaluation evaluate(const Matrix<T>& m, Quantity q, const RunConfig& cfg) {
  Evaluation e;
  if (cfg.method == "blockwise") {
    e.method = Method::blockwise;
  } else if (cfg.method == "dense") {
    e.method = Method::dense;
  } else if (m.order() > 0) {
    const auto rec = recommend(profile_of(decompose(from_matrix(m)), cfg.epsilon));
    e.method = q == Quantity::det ? rec.det : rec.per;
  }
  BlockwiseOptions opt;
  opt.cache.ryser_cap = cfg.ryser_cap;
  if (e.method == Method::blockwise)
    e.value = show(q == Quantity::det ? det_blockwise(m, opt, &e.stats) : per_blockwise(m, opt, &e.stats));
  else
    e.value = show(q == Quantity::det ? det_dense(m) : per_dense(m, cfg.ryser_cap));
  return e;
}

Evaluation evaluate_any(const Matrix<Rational>& m, Quantity q, const RunConfig& cfg) {
  if (cfg.mode == "float") return evaluate(matrix_cast<double>(m), q, cfg);
  if (is_integral(m)) return evaluate(matrix_cast<Integer>(m), q, cfg);
  return evaluate(m, q, cfg);
}

int cmd_value(const RunConfig& cfg, Quantity q, std::ostream& out, std::ostream& err) {
  const auto m = load(cfg);
  const auto start = Clock::now();
  const auto e = evaluate_any(m, q, cfg);
  const double ms = elapsed_ms(start);
  Json j;
  j["quantity"] = to_string(q);
  j["n"] = m.order();
  j["mode"] = cfg.mode;
  j["requested_method"] = cfg.method;
  j["method"] = to_string(e.method);
  j["value"] = e.value;
  emit(cfg, out, j);
  char line[64];
  std::snprintf(line, sizeof line, "wall_time_ms=%.3f\n", ms);
  err << line;
  if (cfg.verbose && e.method == Method::blockwise)
    err << "components=" << e.stats.components << " dense_fallbacks=" << e.stats.dense_fallbacks
        << " cache_entries=" << e.stats.cache_entries << " removal_subsets=" << e.stats.removal_subsets
        << " partitions_visited=" << e.stats.partitions_visited << "\n";
  return kOk;
}

// ---- analyze / bpartitions / trace ------------------------------------------------

BlockDecomposition decompose_input(const Matrix<Rational>& m) {
  if (m.order() == 0) throw DomainError("the 0x0 matrix has no digraph to decompose");
  return decompose(from_matrix(m));
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  const auto m = load(cfg);
  const auto d = decompose_input(m);
  Json j = decomposition_json(d);
  j["bpartition_count"] = bpartition_count(d).get_str();
  j["size_identity_check"] = size_identity_json(d);
  const auto p = profile_of(d, cfg.epsilon);
  j["gamma"] = p.gamma();
  j["delta"] = p.delta();
  emit(cfg, out, j);
  return kOk;
}

int cmd_bpartitions(const RunConfig& cfg, bool list, std::size_t limit, std::ostream& out) {
  const auto m = load(cfg);
  const auto d = decompose_input(m);
  const Integer count = bpartition_count(d);
  Json j;
  j["count"] = count.get_str();
  if (list) {
    Json parts = Json::array();
    std::size_t listed = 0;
    for (const auto& p : enumerate_bpartitions(d)) {
      if (listed == limit) break;
      parts.push_back(Json{{"assignment", assignment_json(p.assignment)}, {"parts", parts_json(p.parts)}});
      ++listed;
    }
    j["limit"] = limit;
    j["listed"] = listed;
    j["truncated"] = count > static_cast<unsigned long>(listed);
    j["partitions"] = parts;
  }
  emit(cfg, out, j);
  return kOk;
}

template <class T>
Json trace_json(const Matrix<T>& m, Quantity q, std::size_t cap) {
  const auto report = trace_terms(m, q, cap);
  Json j;
  j["quantity"] = to_string(q);
  j["total"] = to_string(report.total);
  Json groups = Json::array();
  for (const auto& g : report.groups) {
    Json subsets = Json::array();
    for (const auto& s : g.subsets) {
      Json terms = Json::array(), distinct = Json::array();
      for (const auto& t : s.terms)
        terms.push_back(Json{{"assignment", assignment_json(t.assignment)},
                             {"parts", parts_json(t.parts)},
                             {"value", to_string(t.value)}});
      for (const auto& x : s.distinct)
        distinct.push_back(Json{{"parts", parts_json(x.parts)},
                                {"multiplicity", x.multiplicity},
                                {"prefactor", to_string(x.prefactor)},
                                {"value", to_string(x.value)}});
      subsets.push_back(Json{{"removed", s.removed},
                             {"coefficient", to_string(s.coefficient)},
                             {"inner_sum", to_string(s.inner_sum)},
                             {"total", to_string(s.total)},
                             {"terms", terms},
                             {"distinct", distinct}});
    }
    groups.push_back(Json{{"q", g.q}, {"total", to_string(g.total)}, {"subsets", subsets}});
  }
  j["groups"] = groups;
  return j;
}

int cmd_trace(const RunConfig& cfg, Quantity q, std::size_t cap, std::ostream& out) {
  const auto m = load(cfg);
  emit(cfg, out, is_integral(m) ? trace_json(matrix_cast<Integer>(m), q, cap) : trace_json(m, q, cap));
  return kOk;
}

// ---- advise --------------------------------------------------------------------

// Times Bareiss on seeded random integer matrices and fits the exponent.
double measure_epsilon(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> w(-9, 9);
  std::vector<std::pair<double, double>> samples;
  for (std::size_t n : {24u, 32u, 48u, 64u, 96u}) {
    Matrix<Integer> m(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = w(rng);
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto start = Clock::now();
      volatile bool sink = det_bareiss(m) == 0;
      (void)sink;
      best = std::min(best, elapsed_ms(start));
    }
    samples.emplace_back(static_cast<double>(n), std::max(best, 1e-6));
  }
  return fit_effective_epsilon(samples);
}

struct AdviseArgs {
  std::optional<double> n, delta;
  double k = 1;
  bool curve = false;
  std::size_t k_min = 1, k_max = 50;
  std::string kind = "det";
  bool fit = false;
};

int cmd_advise(RunConfig cfg, const AdviseArgs& a, std::ostream& out, std::ostream& err) {
  std::string epsilon_source = "parameter";
  if (a.fit) {
    cfg.epsilon = measure_epsilon(cfg.seed);
    epsilon_source = "fitted";
    err << "fitted_epsilon=" << to_string(cfg.epsilon) << "\n";
  }
  const CurveKind kind = a.kind == "per" ? CurveKind::per : CurveKind::det;
  if (!cfg.input.empty()) {
    const auto d = decompose_input(load(cfg));
    const auto p = profile_of(d, cfg.epsilon);
    if (a.curve) {
      const auto pts = curve_points(static_cast<double>(p.n), static_cast<double>(p.delta()), cfg.epsilon,
                                    a.k_min, a.k_max, kind);
      emit(cfg, out, curve_csv(pts));
      return kOk;
    }
    const auto r = recommend(p);
    Json j;
    j["n"] = p.n;
    j["k"] = p.k();
    j["sizes"] = p.sizes;
    j["cuts"] = p.cuts;
    j["gamma"] = p.gamma();
    j["delta"] = p.delta();
    j["epsilon"] = cfg.epsilon;
    j["epsilon_source"] = epsilon_source;
    j["det"] = Json{{"blockwise_cost", r.det_cost},
                    {"dense_cost", r.det_dense_cost},
                    {"recommendation", to_string(r.det)}};
    j["per"] = Json{{"log2_blockwise_cost", r.log2_per_cost},
                    {"log2_dense_cost", r.log2_per_dense_cost},
                    {"recommendation", to_string(r.per)}};
    emit(cfg, out, j);
    return kOk;
  }
  if (!a.n || !a.delta) throw CLI::ValidationError("advise needs an input matrix or both --n and --delta");
  if (a.curve) {
    const auto pts = curve_points(*a.n, *a.delta, cfg.epsilon, a.k_min, a.k_max, kind);
    emit(cfg, out, curve_csv(pts));
    return kOk;
  }
  Json j;
  j["n"] = *a.n;
  j["delta"] = *a.delta;
  j["k"] = a.k;
  j["epsilon"] = cfg.epsilon;
  j["epsilon_source"] = epsilon_source;
  j["gamma_bound_det"] = gamma_bound_det(*a.n, *a.delta, a.k, cfg.epsilon);
  j["gamma_bound_per"] = gamma_bound_per(*a.n, *a.delta, a.k);
  emit(cfg, out, j);
  return kOk;
}

// ---- bench ---------------------------------------------------------------------

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct BenchArgs {
  std::string family = "per-chain";
  std::size_t block_size = 0;  // 0: family default
  std::vector<std::size_t> blocks{2, 3, 4, 5};
  int repeat = 3;
};

int cmd_bench(RunConfig cfg, const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const auto dash = a.family.find('-');
  const std::string quantity = a.family.substr(0, dash);
  const std::string shape = dash == std::string::npos ? "" : a.family.substr(dash + 1);
  if ((quantity != "det" && quantity != "per") || (shape != "chain" && shape != "tree"))
    throw CLI::ValidationError("--family must be det-chain, det-tree, per-chain or per-tree");
  const Quantity q = quantity == "det" ? Quantity::det : Quantity::per;
  const std::size_t size = a.block_size ? a.block_size : (q == Quantity::det ? 40 : 8);
  if (a.repeat < 1) throw CLI::ValidationError("--repeat must be positive");

  std::ostringstream csv;
  csv << "family,n,method,wall_time_ms,result_digest\n";
  const std::string family = a.family + "-s" + std::to_string(size);
  for (std::size_t count : a.blocks) {
    GenSpec spec;
    spec.block_sizes.assign(count, size);
    spec.attachment = shape == "chain" ? "chain" : "random_tree";
    spec.seed = cfg.seed;
    const auto m = matrix_cast<Rational>(generate(spec).matrix);
    for (const char* method : {"blockwise", "dense"}) {
      cfg.method = method;
      double best = 1e300;
      std::string digest;
      try {
        for (int rep = 0; rep < a.repeat; ++rep) {
          const auto start = Clock::now();
          const auto e = evaluate_any(m, q, cfg);
          best = std::min(best, elapsed_ms(start));
          digest = fnv1a(e.value);
        }
      } catch (const ResourceError& e) {
        if (cfg.verbose) err << family << " n=" << m.order() << " " << method << ": " << e.what() << "\n";
        csv << family << ',' << m.order() << ',' << method << ",,resource-cap\n";
        continue;
      }
      char ms[32];
      std::snprintf(ms, sizeof ms, "%.3f", best);
      csv << family << ',' << m.order() << ',' << method << ',' << ms << ',' << digest << '\n';
    }
  }
  emit(cfg, out, csv.str());
  return kOk;
}

// ---- gen -----------------------------------------------------------------------

int cmd_gen(const RunConfig& cfg, const std::string& spec_path, const std::string& spec_inline,
            const std::string& matrix_out, const std::string& matrix_format, std::ostream& out) {
  nlohmann::json doc;
  try {
    if (!spec_inline.empty()) {
      doc = nlohmann::json::parse(spec_inline);
    } else {
      std::ifstream in(spec_path);
      if (!in) throw ParseError("cannot open '" + spec_path + "'", 0);
      doc = nlohmann::json::parse(in);
    }
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("generator spec: ") + e.what(), 0);
  }
  const GenSpec spec = gen_spec_from_json(doc);
  const auto gen = generate(spec);
  Json j;
  j["spec"] = to_json(spec);
  j["expected"] = decomposition_json(gen.expected);
  if (!matrix_out.empty()) {
    MatrixFormat f = guess_format(matrix_out);
    if (matrix_format != "auto") {
      auto named = format_from_name(matrix_format);
      if (!named) throw std::invalid_argument("unknown format '" + matrix_format + "'");
      f = *named;
    }
    std::ofstream file(matrix_out, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot write '" + matrix_out + "'");
    file << format_matrix(gen.matrix, f);
    j["matrix_path"] = matrix_out;
    j["matrix_format"] = format_name(f);
  } else {
    j["matrix"] = Json::parse(format_matrix(gen.matrix, MatrixFormat::json));
  }
  emit(cfg, out, j);
  return kOk;
}

// ---- wiring --------------------------------------------------------------------

void add_input(CLI::App* sub, RunConfig& cfg, bool required = true) {
  auto* opt = sub->add_option("input", cfg.input, "Matrix file (.csv, .mtx or .json)");
  if (required) opt->required();
  sub->add_option("--format", cfg.format, "Input format")
      ->check(CLI::IsMember({"auto", "dense-csv", "matrix-market", "json"}));
}

void add_compute(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--mode", cfg.mode, "Arithmetic")->check(CLI::IsMember({"exact", "float"}));
  sub->add_option("--method", cfg.method, "Algorithm")->check(CLI::IsMember({"auto", "blockwise", "dense"}));
  sub->add_option("--ryser-cap", cfg.ryser_cap, "Largest order handed to Ryser");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Block-decomposition determinants and permanents"};
  app.name("blockdet");
  app.require_subcommand(1);
  app.add_option("--epsilon", cfg.epsilon, "Matrix-multiplication exponent for the advisor")->check(
      CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for generated inputs");
  app.add_option("-o,--output", cfg.output, "Write the report to a file instead of stdout");
  app.add_flag("-v,--verbose", cfg.verbose, "Print statistics to stderr");
  app.fallthrough();

  auto* analyze = app.add_subcommand("analyze", "Blocks, cut-vertices and size identity as JSON");
  add_input(analyze, cfg);

  bool list = false;
  std::size_t limit = 10000;
  auto* bparts = app.add_subcommand("bpartitions", "Count and optionally list B-partitions");
  add_input(bparts, cfg);
  bparts->add_flag("--list", list, "List partitions");
  bparts->add_option("--limit", limit, "Largest number of partitions listed");

  auto* det = app.add_subcommand("det", "Determinant");
  add_input(det, cfg);
  add_compute(det, cfg);
  auto* per = app.add_subcommand("per", "Permanent");
  add_input(per, cfg);
  add_compute(per, cfg);

  std::string trace_quantity = "det";
  std::size_t trace_cap = kTraceDefaultCap;
  auto* trace = app.add_subcommand("trace", "Every term of the cut-vertex removal sum");
  add_input(trace, cfg);
  trace->add_option("--quantity", trace_quantity)->check(CLI::IsMember({"det", "per"}));
  trace->add_option("--cap", trace_cap, "Largest number of terms");

  AdviseArgs advise_args;
  auto* advise = app.add_subcommand("advise", "Cost model, recommendation and bound curves");
  add_input(advise, cfg, false);
  advise->add_option("--n", advise_args.n, "Matrix order");
  advise->add_option("--delta", advise_args.delta, "Largest block size");
  advise->add_option("--k", advise_args.k, "Block count for the bound");
  advise->add_flag("--curve", advise_args.curve, "Emit k,gamma_max,vacuous CSV");
  advise->add_option("--k-min", advise_args.k_min);
  advise->add_option("--k-max", advise_args.k_max);
  advise->add_option("--kind", advise_args.kind)->check(CLI::IsMember({"det", "per"}));
  advise->add_flag("--fit-epsilon", advise_args.fit, "Fit epsilon from timed Bareiss runs");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time blockwise against dense on generated families");
  bench->add_option("--family", bench_args.family)
      ->check(CLI::IsMember({"det-chain", "det-tree", "per-chain", "per-tree"}));
  bench->add_option("--block-size", bench_args.block_size);
  bench->add_option("--blocks", bench_args.blocks, "Block counts")->delimiter(',');
  bench->add_option("--repeat", bench_args.repeat);
  add_compute(bench, cfg);

  std::string spec_path, spec_inline, matrix_out, matrix_format = "auto";
  auto* gen = app.add_subcommand("gen", "Generate a block-structured matrix");
  auto* spec_opt = gen->add_option("--spec", spec_path, "Generator spec JSON file");
  auto* inline_opt = gen->add_option("--spec-json", spec_inline, "Generator spec as a JSON string");
  spec_opt->excludes(inline_opt);
  gen->add_option("--matrix-out", matrix_out, "Write the matrix here");
  gen->add_option("--matrix-format", matrix_format)
      ->check(CLI::IsMember({"auto", "dense-csv", "matrix-market", "json"}));

  try {
    app.parse(argc, argv);
    if (*gen && spec_path.empty() && spec_inline.empty())
      throw CLI::RequiredError("gen needs --spec or --spec-json");
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(cfg, out);
    if (*bparts) return cmd_bpartitions(cfg, list, limit, out);
    if (*det) return cmd_value(cfg, Quantity::det, out, err);
    if (*per) return cmd_value(cfg, Quantity::per, out, err);
    if (*trace) return cmd_trace(cfg, trace_quantity == "det" ? Quantity::det : Quantity::per, trace_cap, out);
    if (*advise) return cmd_advise(cfg, advise_args, out, err);
    if (*bench) return cmd_bench(cfg, bench_args, out, err);
    if (*gen) return cmd_gen(cfg, spec_path, spec_inline, matrix_out, matrix_format, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << "\n";
    return kParse;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace blockdet::cli
