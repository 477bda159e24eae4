// Command-line front end: deterministic, file-emitting experiment runner for
// the schurand library. Subcommands map one-to-one onto the library modules;
// every output file embeds its full configuration as a header comment (CSV)
// or a config field (JSON), and reruns with identical flags, seed, and worker
// count produce byte-identical files.
//
// Exit codes: 0 success, 2 flag/parse error, 3 argument validation error,
// 4 resource budget exceeded, 1 anything else.

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "schurand/codes.hpp"
#include "schurand/fit.hpp"
#include "schurand/haar.hpp"
#include "schurand/irrep.hpp"
#include "schurand/otoc.hpp"
#include "schurand/partition.hpp"
#include "schurand/qntk.hpp"
#include "schurand/schur.hpp"
#include "schurand/util.hpp"

namespace {

using nlohmann::json;
using namespace schurand;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// CSV cell escape: quote only when the content demands it (commas in
// partition labels, mostly), so numeric cells stay bare in both formats.
std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// The environment override wins over the flag so batch drivers can retune
// worker counts without touching recorded command lines.
int resolve_threads(int flag_value) {
  if (const char* env = std::getenv("SCHURAND_THREADS")) {
    int t = 0;
    try {
      t = std::stoi(env);
    } catch (...) {
      throw std::invalid_argument("SCHURAND_THREADS is not an integer");
    }
    if (t < 1) throw std::invalid_argument("SCHURAND_THREADS must be >= 1");
    return t;
  }
  if (flag_value < 1) throw std::invalid_argument("--threads must be >= 1");
  return flag_value;
}

Partition parse_partition_arg(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (...) {
      throw std::invalid_argument("--lambda: cannot parse part '" + item + "'");
    }
    if (pos != item.size())
      throw std::invalid_argument("--lambda: cannot parse part '" + item + "'");
    parts.push_back(v);
  }
  Partition lam(parts);
  if (!lam.valid())
    throw std::invalid_argument(
        "--lambda must be weakly decreasing positive parts, e.g. \"3,1\"");
  return lam;
}

// Tabular output with config provenance; cells are pre-formatted so the CSV
// and JSON renderings of a run carry identical values.
struct OutputDoc {
  std::string subcommand;
  json config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, json>> trailers;

  std::string to_csv() const {
    std::ostringstream out;
    out << "# schurand " << subcommand << "\n";
    out << "# config: " << config.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << csv_escape(row[i]);
      out << "\n";
    }
    for (const auto& [name, value] : trailers)
      out << "# " << name << ": " << value.dump() << "\n";
    return out.str();
  }

  std::string to_json() const {
    json doc;
    doc["tool"] = "schurand";
    doc["subcommand"] = subcommand;
    doc["config"] = config;
    doc["columns"] = columns;
    doc["rows"] = rows;
    for (const auto& [name, value] : trailers) doc[name] = value;
    return doc.dump(2) + "\n";
  }

  // Empty path -> document to stdout; otherwise file plus the caller's
  // one-line stdout summary.
  void write(const std::string& out_path, const std::string& format) const {
    const std::string text = format == "json" ? to_json() : to_csv();
    if (out_path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << text;
    f.flush();
    if (!f) throw std::runtime_error("failed writing output file: " + out_path);
  }
};

void summary_line(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) return;  // the document itself went to stdout
  std::cout << text << " -> " << out_path << "\n";
}

json fit_json(const FitResult& fit) {
  return json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"r_squared", fit.r_squared},
              {"n_points", fit.n_points}};
}

// ---------------------------------------------------------------------------
// dims
// ---------------------------------------------------------------------------

struct DimsArgs {
  int n = 0;
  int d = 0;
  std::string out;
  std::string format = "csv";
};

void run_dims(const DimsArgs& a) {
  SectorLayout layout = layout_for(a.n, a.d);
  OutputDoc doc;
  doc.subcommand = "dims";
  doc.config = {{"n", a.n}, {"d", a.d}};
  doc.columns = {"lambda", "dim", "mult", "product"};
  long long sum = 0;
  for (const SectorInfo& s : layout.sectors) {
    sum += s.dim * s.mult;
    doc.rows.push_back({s.lambda.to_string(), std::to_string(s.dim),
                        std::to_string(s.mult), std::to_string(s.dim * s.mult)});
  }
  doc.rows.push_back({std::string("total"), "", "", std::to_string(sum)});
  doc.write(a.out, a.format);
  summary_line(a.out, "dims: n=" + std::to_string(a.n) + " d=" + std::to_string(a.d) +
                          " sectors=" + std::to_string(layout.sectors.size()) +
                          " sum=" + std::to_string(sum));
}

// ---------------------------------------------------------------------------
// schur
// ---------------------------------------------------------------------------

struct SchurArgs {
  int n = 0;
  int d = 0;
  bool print_blocks = false;
  std::string cache;
  std::string out;
  std::string format = "csv";
};

void run_schur(const SchurArgs& a) {
  std::unique_ptr<SchurBasis> basis;
  bool cache_hit = false;
  if (!a.cache.empty()) {
    if (auto loaded = load_schur_basis(a.n, a.d, a.cache)) {
      basis = std::make_unique<SchurBasis>(std::move(*loaded));
      cache_hit = true;
    }
  }
  if (!basis) {
    basis = std::make_unique<SchurBasis>(build_schur_basis(a.n, a.d));
    if (!a.cache.empty() && !save_schur_basis(*basis, a.cache))
      throw std::runtime_error("cannot write cache file: " + a.cache);
  }
  const double ortho = (basis->q.transpose() * basis->q -
                        Eigen::MatrixXd::Identity(basis->dim, basis->dim))
                           .cwiseAbs()
                           .maxCoeff();

  if (a.print_blocks) {
    OutputDoc doc;
    doc.subcommand = "schur";
    doc.config = {{"n", a.n}, {"d", a.d}, {"print_blocks", true}};
    doc.columns = {"generator", "lambda", "row", "col", "value"};
    for (const SectorInfo& s : basis->sectors) {
      IrrepBlockRep rep = build_irrep(s.lambda);
      for (int j = 1; j <= a.n - 1; ++j) {
        Eigen::MatrixXd g = rep.gen(j);
        for (long long r = 0; r < s.dim; ++r)
          for (long long c = 0; c < s.dim; ++c)
            doc.rows.push_back({std::to_string(j), s.lambda.to_string(),
                                std::to_string(r), std::to_string(c),
                                fmt(g(r, c))});
      }
    }
    doc.write(a.out, a.format);
  }
  std::string note = cache_hit ? " (cache hit)" : "";
  std::cout << "schur: n=" << a.n << " d=" << a.d << " dim=" << basis->dim
            << " sectors=" << basis->sectors.size()
            << " ortho_residual=" << fmt(ortho) << note << "\n";
}

// ---------------------------------------------------------------------------
// haar-sample
// ---------------------------------------------------------------------------

struct HaarArgs {
  int n = 0;
  int d = 0;
  long long count = 1;
  unsigned long long seed = 0;
  std::string out;
  std::string format = "csv";
};

void run_haar_sample(const HaarArgs& a) {
  if (a.count < 1) throw std::invalid_argument("haar-sample: need --count >= 1");
  SectorLayout layout = layout_for(a.n, a.d);
  OutputDoc doc;
  doc.subcommand = "haar-sample";
  doc.config = {{"n", a.n},
                {"d", a.d},
                {"count", a.count},
                {"seed", a.seed}};
  doc.columns = {"draw", "lambda", "dim", "mult", "re_sum", "im_sum", "fro_norm"};
  RngStream rng(a.seed, 0);
  for (long long i = 0; i < a.count; ++i) {
    SymmetricUnitary u = sample(layout, rng);
    for (std::size_t si = 0; si < layout.sectors.size(); ++si) {
      const SectorInfo& s = layout.sectors[si];
      const Eigen::MatrixXcd& b = u.blocks[si];
      doc.rows.push_back({std::to_string(i), s.lambda.to_string(),
                          std::to_string(s.dim), std::to_string(s.mult),
                          fmt(b.real().sum()), fmt(b.imag().sum()), fmt(b.norm())});
    }
  }
  doc.write(a.out, a.format);
  summary_line(a.out, "haar-sample: n=" + std::to_string(a.n) +
                          " d=" + std::to_string(a.d) + " draws=" +
                          std::to_string(a.count) + " seed=" + std::to_string(a.seed));
}

// ---------------------------------------------------------------------------
// otoc
// ---------------------------------------------------------------------------

struct OtocArgs {
  int n_min = 0;
  int n_max = 0;
  int d = 2;
  int r = 0;  // 0 selects the per-size default probe site
  std::string mode = "sym";
  long long samples = 0;  // 0 selects the exact path
  unsigned long long seed = 0;
  bool seed_given = false;
  int threads = 1;
  std::string out;
  std::string format = "csv";
};

void run_otoc(const OtocArgs& a) {
  if (a.samples > 0 && !a.seed_given)
    throw std::invalid_argument("otoc: --seed is required when --samples > 0");
  OtocMode mode = parse_otoc_mode(a.mode);
  const int workers = resolve_threads(a.threads);
  OtocSweep sweep =
      scaling_sweep(a.n_min, a.n_max, a.d, mode, a.samples, a.seed, a.r, workers);

  OutputDoc doc;
  doc.subcommand = "otoc";
  doc.config = {{"n_min", a.n_min}, {"n_max", a.n_max},   {"d", a.d},
                {"mode", a.mode},   {"r", a.r},           {"samples", a.samples},
                {"seed", a.seed},   {"threads", workers}};
  doc.columns = {"n", "d", "mode", "r", "F", "stderr", "n_samples", "seed"};
  for (const OtocResult& row : sweep.rows)
    doc.rows.push_back({std::to_string(row.n), std::to_string(row.d), row.mode,
                        std::to_string(row.r), fmt(row.F), fmt(row.stderr_),
                        std::to_string(row.n_samples), std::to_string(row.seed)});
  doc.trailers.push_back({"fit", fit_json(sweep.fit)});
  doc.write(a.out, a.format);
  summary_line(a.out, "otoc: mode=" + a.mode + " rows=" +
                          std::to_string(sweep.rows.size()) +
                          " slope=" + fmt(sweep.fit.slope) +
                          " r_squared=" + fmt(sweep.fit.r_squared));
}

// ---------------------------------------------------------------------------
// code
// ---------------------------------------------------------------------------

struct CodeArgs {
  int n = 0;
  int k = 1;
  int d = 2;
  int t = 0;  // accessible qudits, mi mode only
  std::string mode = "avg";
  long long samples = 0;
  unsigned long long seed = 0;
  bool seed_given = false;
  int threads = 1;
  std::string out;
  std::string format = "csv";
};

void run_code(const CodeArgs& a) {
  const int workers = resolve_threads(a.threads);
  OutputDoc doc;
  doc.subcommand = "code";
  doc.config = {{"n", a.n},       {"k", a.k},       {"d", a.d},
                {"t", a.t},       {"mode", a.mode}, {"samples", a.samples},
                {"seed", a.seed}, {"threads", workers}};
  doc.columns = {"n", "k", "d", "mode", "value", "stderr", "approx"};
  auto push_row = [&](int n, const std::string& value, const std::string& stderr_s,
                      const std::string& approx) {
    doc.rows.push_back({std::to_string(n), std::to_string(a.k), std::to_string(a.d),
                        a.mode, value, stderr_s, approx});
  };
  std::string summary;

  if (a.mode == "avg") {
    CodeInstance{a.n, a.k, a.d}.validate();
    ChoiBound b = choi_error_bound(a.n, a.k, a.d);
    push_row(a.n, fmt(b.exact), fmt(0.0), fmt(b.approx));
    doc.trailers.push_back({"summary", json{{"paper_bound", b.paper_bound}}});
    summary = "code: avg exact=" + fmt(b.exact) + " bound=" + fmt(b.paper_bound);
  } else if (a.mode == "sample") {
    if (a.samples < 1)
      throw std::invalid_argument("code: --samples >= 1 required for mode sample");
    if (!a.seed_given)
      throw std::invalid_argument("code: --seed is required for mode sample");
    CodeInstance code{a.n, a.k, a.d};
    code.validate();
    auto basis = get_schur_basis_cached(a.n, a.d);
    ChoiBound b = choi_error_bound(a.n, a.k, a.d);
    ChoiSampleStats st = sampled_choi_error(code, *basis, a.samples, a.seed, workers);
    push_row(a.n, fmt(st.direct.mean), fmt(st.direct.stderr_), fmt(b.approx));
    doc.trailers.push_back(
        {"summary", json{{"fluctuation_mean", st.fluctuation.mean},
                         {"fluctuation_stderr", st.fluctuation.stderr_},
                         {"avg_term", st.avg_term},
                         {"n_samples", st.n_samples}}});
    summary = "code: sample mean=" + fmt(st.direct.mean) + " stderr=" +
              fmt(st.direct.stderr_);
  } else if (a.mode == "fig2") {
    const int n_max = a.n == 0 ? 64 : a.n;
    if (n_max < 8)
      throw std::invalid_argument("code: fig2 sweep needs --n >= 8 (or omit it)");
    std::vector<int> ns;
    for (int n = 8; n <= n_max; n *= 2) ns.push_back(n);
    Figure2Sweep sweep = figure2_sweep(a.k, ns, a.d);
    for (const Figure2Row& row : sweep.rows)
      push_row(row.n, fmt(row.exact), fmt(0.0), fmt(row.approx));
    doc.trailers.push_back({"fit", fit_json(sweep.fit)});
    summary = "code: fig2 k=" + std::to_string(a.k) + " rows=" +
              std::to_string(sweep.rows.size()) + " slope=" + fmt(sweep.fit.slope);
  } else if (a.mode == "mi") {
    if (a.samples > 0 && !a.seed_given)
      throw std::invalid_argument("code: --seed is required when --samples > 0");
    Renyi2Result r = renyi2_mi_bound(a.n, a.k, a.t, a.d, a.samples == 0, a.samples,
                                     a.seed, workers);
    push_row(a.n, fmt(r.bound), fmt(r.stderr_), "");
    doc.trailers.push_back(
        {"summary", json{{"t", a.t}, {"n_samples", r.n_samples}}});
    summary = "code: mi t=" + std::to_string(a.t) + " bound=" + fmt(r.bound);
  } else {
    throw std::invalid_argument("code: unknown mode '" + a.mode + "'");
  }

  doc.write(a.out, a.format);
  summary_line(a.out, summary);
}

// ---------------------------------------------------------------------------
// qntk
// ---------------------------------------------------------------------------

struct QntkArgs {
  std::string lambda_str;
  int n = 0;  // optional; checked against the partition when given
  int d = 2;
  int layers = 2;
  int steps = 100;
  double eta = 0.01;
  unsigned long long seed = 0;
  std::string rho = "gt";
  std::string out;
  std::string format = "csv";
};

void run_qntk(const QntkArgs& a) {
  Partition lam = parse_partition_arg(a.lambda_str);
  if (a.n != 0 && lam.n() != a.n)
    throw std::invalid_argument("qntk: --n disagrees with the weight of --lambda");
  if (a.d < 2) throw std::invalid_argument("qntk: need --d >= 2");
  if (lam.rows() > a.d)
    throw std::invalid_argument("qntk: lambda has more rows than d; sector is empty");
  if (a.layers < 1) throw std::invalid_argument("qntk: need --layers >= 1");
  if (a.steps < 1) throw std::invalid_argument("qntk: need --steps >= 1");
  if (!(a.eta > 0.0)) throw std::invalid_argument("qntk: need --eta > 0");
  if (a.rho != "gt" && a.rho != "mixed")
    throw std::invalid_argument("qntk: --rho must be gt or mixed");

  QntkRep rep = build_qntk_rep(lam);
  LearningProblem problem = default_problem(rep, a.d, a.rho == "mixed", a.eta);
  CqaAnsatz ansatz = CqaAnsatz::zeros(rep, a.layers);
  RngStream rng(a.seed, 0);
  ansatz.init_uniform(rng);
  TrainResult tr = train(rep, ansatz, problem, a.steps);

  OutputDoc doc;
  doc.subcommand = "qntk";
  doc.config = {{"lambda", lam.to_string()},
                {"n", lam.n()},
                {"d", a.d},
                {"layers", a.layers},
                {"eta", a.eta},
                {"steps", a.steps},
                {"seed", a.seed},
                {"rho", a.rho}};
  doc.columns = {"t", "eps", "K"};
  std::vector<double> ts, log_eps;
  for (const TrainStep& s : tr.trajectory) {
    doc.rows.push_back({std::to_string(s.t), fmt(s.eps), fmt(s.k)});
    if (std::fabs(s.eps) > 0.0) {
      ts.push_back(s.t);
      log_eps.push_back(std::log(std::fabs(s.eps)));
    }
  }
  FitResult decay;
  if (ts.size() >= 2) decay = linear_fit(ts, log_eps);
  const double rough = heuristic_kbar(
      std::max(rep.n() - 1, 1), static_cast<double>(a.layers) * rep.params_per_layer(),
      static_cast<double>(rep.dim));
  doc.trailers.push_back({"summary", json{{"kbar", tr.kbar},
                                          {"heuristic_kbar", rough},
                                          {"decay_rate", decay.slope},
                                          {"decay_r_squared", decay.r_squared},
                                          {"eta", a.eta},
                                          {"diverged", tr.diverged},
                                          {"outside_guarantee", tr.outside_guarantee}}});
  doc.write(a.out, a.format);
  summary_line(a.out, "qntk: lambda=" + lam.to_string() + " layers=" +
                          std::to_string(a.layers) + " kbar=" + fmt(tr.kbar) +
                          " decay_rate=" + fmt(decay.slope));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SU(d)-symmetric random unitaries: sectors, sampling, and experiments"};
  app.require_subcommand(1);

  DimsArgs dims;
  CLI::App* dims_cmd = app.add_subcommand("dims", "Sector dimensions and multiplicities");
  dims_cmd->add_option("--n", dims.n, "number of qudits")->required();
  dims_cmd->add_option("--d", dims.d, "local dimension")->required();
  dims_cmd->add_option("--out", dims.out, "output file (default: stdout)");
  dims_cmd->add_option("--format", dims.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  SchurArgs schur;
  CLI::App* schur_cmd =
      app.add_subcommand("schur", "Build the Schur change of basis");
  schur_cmd->add_option("--n", schur.n, "number of qudits")->required();
  schur_cmd->add_option("--d", schur.d, "local dimension")->required();
  schur_cmd->add_flag("--print-blocks", schur.print_blocks,
                      "dump per-sector generator matrices");
  schur_cmd->add_option("--cache", schur.cache, "binary cache file for the basis");
  schur_cmd->add_option("--out", schur.out, "output file (default: stdout)");
  schur_cmd->add_option("--format", schur.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  HaarArgs haar;
  CLI::App* haar_cmd = app.add_subcommand(
      "haar-sample", "Sample symmetric unitaries; per-sector checksums");
  haar_cmd->add_option("--n", haar.n, "number of qudits")->required();
  haar_cmd->add_option("--d", haar.d, "local dimension")->required();
  haar_cmd->add_option("--count", haar.count, "number of draws");
  haar_cmd->add_option("--seed", haar.seed, "RNG seed")->required();
  haar_cmd->add_option("--out", haar.out, "output file (default: stdout)");
  haar_cmd->add_option("--format", haar.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  OtocArgs otoc;
  CLI::App* otoc_cmd =
      app.add_subcommand("otoc", "Late-time OTOC size sweep with power-law fit");
  otoc_cmd->add_option("--n-min", otoc.n_min, "smallest system size")->required();
  otoc_cmd->add_option("--n-max", otoc.n_max, "largest system size")->required();
  otoc_cmd->add_option("--d", otoc.d, "local dimension");
  otoc_cmd->add_option("--mode", otoc.mode, "observable mode")
      ->check(CLI::IsMember({"sym", "pauli"}));
  otoc_cmd->add_option("--r", otoc.r, "probe site (0 = per-size default)");
  otoc_cmd->add_option("--samples", otoc.samples, "MC samples (0 = exact)");
  auto* otoc_seed = otoc_cmd->add_option("--seed", otoc.seed, "RNG seed");
  otoc_cmd->add_option("--threads", otoc.threads, "MC worker count");
  otoc_cmd->add_option("--out", otoc.out, "output file (default: stdout)");
  otoc_cmd->add_option("--format", otoc.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  CodeArgs code;
  CLI::App* code_cmd =
      app.add_subcommand("code", "Covariant erasure codes: errors and bounds");
  code_cmd->add_option("--n", code.n, "physical qudits");
  code_cmd->add_option("--k", code.k, "logical qudits");
  code_cmd->add_option("--d", code.d, "local dimension");
  code_cmd->add_option("--t", code.t, "accessible qudits (mi mode)");
  code_cmd->add_option("--mode", code.mode, "avg, sample, fig2, or mi")
      ->check(CLI::IsMember({"avg", "sample", "fig2", "mi"}));
  code_cmd->add_option("--samples", code.samples, "MC samples (0 = exact)");
  auto* code_seed = code_cmd->add_option("--seed", code.seed, "RNG seed");
  code_cmd->add_option("--threads", code.threads, "MC worker count");
  code_cmd->add_option("--out", code.out, "output file (default: stdout)");
  code_cmd->add_option("--format", code.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  QntkArgs qntk;
  CLI::App* qntk_cmd =
      app.add_subcommand("qntk", "CQA sector training and kernel diagnostics");
  qntk_cmd->add_option("--lambda", qntk.lambda_str, "sector partition, e.g. \"3,1\"")
      ->required();
  qntk_cmd->add_option("--n", qntk.n, "number of qudits (checked against --lambda)");
  qntk_cmd->add_option("--d", qntk.d, "local dimension");
  qntk_cmd->add_option("--layers", qntk.layers, "ansatz layers");
  qntk_cmd->add_option("--eta", qntk.eta, "learning rate");
  qntk_cmd->add_option("--steps", qntk.steps, "gradient-descent steps");
  qntk_cmd->add_option("--seed", qntk.seed, "RNG seed for the initialization")
      ->required();
  qntk_cmd->add_option("--rho", qntk.rho, "sector state: gt or mixed")
      ->check(CLI::IsMember({"gt", "mixed"}));
  qntk_cmd->add_option("--out", qntk.out, "output file (default: stdout)");
  qntk_cmd->add_option("--format", qntk.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (dims_cmd->parsed()) run_dims(dims);
    if (schur_cmd->parsed()) run_schur(schur);
    if (haar_cmd->parsed()) run_haar_sample(haar);
    if (otoc_cmd->parsed()) {
      otoc.seed_given = otoc_seed->count() > 0;
      run_otoc(otoc);
    }
    if (code_cmd->parsed()) {
      code.seed_given = code_seed->count() > 0;
      run_code(code);
    }
    if (qntk_cmd->parsed()) run_qntk(qntk);
  } catch (const budget_error& e) {
    std::cerr << "error (budget): " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error (validation): " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
