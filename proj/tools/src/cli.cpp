#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "csv.hpp"
#include "nmcopula/association.hpp"
#include "nmcopula/copula_core.hpp"
#include "nmcopula/empirical.hpp"
#include "nmcopula/error.hpp"
#include "nmcopula/inference.hpp"
#include "nmcopula/normal_mode.hpp"
#include "svg.hpp"

#ifndef NMCOPULA_VERSION
#define NMCOPULA_VERSION "0.0.0"
#endif

namespace nmcopula::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kMaxSweepKappa = 8;
constexpr std::size_t kMinFitRows = 20;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    raise(ErrorCode::InvalidParameter, what + ": cannot parse '" + s + "'");
  }
  return v;
}

std::vector<int> parse_kappa(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) {
    const double v = parse_number(item, "kappa");
    if (v != std::floor(v) || v < 1 || v > 1e6) {
      raise(ErrorCode::InvalidParameter, "kappa entries must be positive integers, got " + item);
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::pair<double, double> parse_trim(const std::string& s) {
  const auto parts = split_list(s);
  if (parts.size() != 2) raise(ErrorCode::InvalidParameter, "--trim expects lo,hi");
  return {parse_number(parts[0], "trim"), parse_number(parts[1], "trim")};
}

Family require_family(const std::string& name) {
  const auto f = parse_family(name);
  if (!f) raise(ErrorCode::InvalidParameter, "unknown family '" + name + "'");
  return *f;
}

Criterion parse_criterion(const std::string& s) {
  if (s == "cvmc") return Criterion::CvMC;
  if (s == "aic") return Criterion::AIC;
  if (s == "cic" || s == "neg2n_cic") return Criterion::CIC;
  raise(ErrorCode::InvalidParameter, "unknown criterion '" + s + "' (cvmc, aic, cic)");
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json measures_json(const MeasureSet& m) {
  return Json{{"sigma", number(m.sigma)},       {"rho", number(m.rho)},
              {"tau", number(m.tau)},           {"beta", number(m.beta)},
              {"gamma", number(m.gamma)},       {"footrule", number(m.footrule)},
              {"provenance", std::string(to_string(m.provenance))}};
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) raise(ErrorCode::FileNotFound, "cannot write " + path.string());
  os << text;
}

bool wants(const std::vector<std::string>& formats, const std::string& f) {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

std::vector<std::string> parse_formats(const std::string& s) {
  auto formats = split_list(s);
  for (const auto& f : formats) {
    if (f != "json" && f != "csv" && f != "svg") {
      raise(ErrorCode::InvalidParameter, "unknown output format '" + f + "'");
    }
  }
  return formats;
}

CopulaModel model_from(const std::string& family, double theta,
                       const std::string& kappa, int dimension) {
  const Family f = require_family(family);
  return CopulaModel::make(f, theta, parse_kappa(kappa), dimension);
}

// -------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string input;
  std::string columns;
  std::string families = "normal_mode,amh,clayton,frank,fgm,gaussian";
  std::string kappa = "1,1";
  int kappa_sweep = 0;
  std::string trim = "0.01,0.99";
  std::uint64_t seed = 1;
  std::string out = ".";
  std::string formats = "json,csv,svg";
  std::string criterion = "cic";
  unsigned threads = 1;
};

std::vector<FamilySpec> fit_specs(const FitArgs& a) {
  std::vector<FamilySpec> specs;
  if (a.kappa_sweep < 0 || a.kappa_sweep > kMaxSweepKappa) {
    raise(ErrorCode::InvalidParameter,
          "--kappa-sweep must lie in [1, " + std::to_string(kMaxSweepKappa) + "]");
  }
  for (const auto& name : split_list(a.families)) {
    const Family f = require_family(name);
    if (f == Family::NormalMode) {
      if (a.kappa_sweep > 0) {
        for (int k1 = 1; k1 <= a.kappa_sweep; ++k1) {
          for (int k2 = 1; k2 <= a.kappa_sweep; ++k2) {
            specs.push_back(FamilySpec::defaults(f, {k1, k2}));
          }
        }
      } else {
        specs.push_back(FamilySpec::defaults(f, parse_kappa(a.kappa)));
      }
    } else {
      specs.push_back(FamilySpec::defaults(f));
    }
  }
  for (const auto& s : specs) s.validate();
  return specs;
}

Json report_json(const FitReport& r) {
  Json kappa = r.family == Family::NormalMode ? Json(r.kappa) : Json(nullptr);
  return Json{{"label", r.label},
              {"family", std::string(family_name(r.family))},
              {"kappa", kappa},
              {"theta_hat", number(r.theta_hat)},
              {"loglik", number(r.loglik)},
              {"cvmc", number(r.cvmc)},
              {"aic", number(r.aic)},
              {"cic", number(r.cic)},
              {"neg2n_cic", number(r.neg2n_cic)},
              {"n", r.n},
              {"flags", r.flags}};
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const auto formats = parse_formats(a.formats);
  const Criterion criterion = parse_criterion(a.criterion);
  const auto specs = fit_specs(a);
  if (specs.size() < 2) raise(ErrorCode::PreconditionViolated, "fit needs at least two families");
  const auto [lo, hi] = parse_trim(a.trim);

  const CsvTable table = read_csv(a.input);
  const auto cols = select_columns(table.header, a.columns);
  if (cols.size() != 2) raise(ErrorCode::PreconditionViolated, "fit needs exactly two columns");
  if (table.values.rows() < 2) {
    raise(ErrorCode::PreconditionViolated, "input has fewer than 2 data rows");
  }
  RowMatrix picked(table.values.rows(), 2);
  for (std::size_t i = 0; i < picked.rows(); ++i) {
    picked(i, 0) = table.values(i, cols[0]);
    picked(i, 1) = table.values(i, cols[1]);
  }
  const RawSample raw(std::move(picked), {table.header[cols[0]], table.header[cols[1]]});
  const RawSample trimmed = quantile_trim(raw, lo, hi);
  if (trimmed.rows() < kMinFitRows) {
    raise(ErrorCode::PreconditionViolated,
          "fit needs at least " + std::to_string(kMinFitRows) + " rows after trimming, got " +
              std::to_string(trimmed.rows()));
  }
  const PseudoSample ps = pseudo_observations(trimmed);
  const Comparison cmp = compare_models(specs, ps, CompareOptions{criterion, a.threads});

  Json doc;
  doc["version"] = NMCOPULA_VERSION;
  Json config{{"command", "fit"},
              {"input", a.input},
              {"columns", trimmed.names()},
              {"families", split_list(a.families)},
              {"kappa", a.kappa_sweep > 0 ? Json(nullptr) : Json(parse_kappa(a.kappa))},
              {"kappa_sweep", a.kappa_sweep > 0 ? Json(a.kappa_sweep) : Json(nullptr)},
              {"trim", Json::array({lo, hi})},
              {"seed", a.seed},
              {"criterion", std::string(to_string(criterion))},
              {"formats", formats}};
  doc["config"] = config;
  doc["data"] = Json{{"n_input", raw.rows()},
                     {"n_used", trimmed.rows()},
                     {"tie_counts", ps.tie_counts()}};
  doc["reports"] = Json::array();
  for (const auto& r : cmp.reports) doc["reports"].push_back(report_json(r));
  doc["ranking"] = Json{{"cvmc", cmp.rank_cvmc}, {"aic", cmp.rank_aic}, {"neg2n_cic", cmp.rank_cic}};
  doc["warnings"] = cmp.warnings;

  const fs::path dir(a.out);
  fs::create_directories(dir);
  if (wants(formats, "json")) write_text(dir / "report.json", doc.dump(2) + "\n");
  if (wants(formats, "csv")) {
    std::ostringstream os;
    os << "label,family,kappa,theta_hat,loglik,cvmc,aic,cic,neg2n_cic,flags\n";
    for (const auto& r : cmp.reports) {
      std::string kappa;
      for (std::size_t k = 0; k < r.kappa.size(); ++k) {
        kappa += (k ? " " : "") + std::to_string(r.kappa[k]);
      }
      std::string flags;
      for (std::size_t k = 0; k < r.flags.size(); ++k) flags += (k ? " " : "") + r.flags[k];
      os << '"' << r.label << "\"," << family_name(r.family) << ',' << kappa << ','
         << format_double(r.theta_hat) << ',' << format_double(r.loglik) << ','
         << format_double(r.cvmc) << ',' << format_double(r.aic) << ','
         << format_double(r.cic) << ',' << format_double(r.neg2n_cic) << ',' << flags << '\n';
    }
    write_text(dir / "report.csv", os.str());
  }
  if (wants(formats, "svg")) {
    write_text(dir / "scatter.svg",
               scatter_svg(ps.u(), trimmed.names()[0] + " (pseudo-observation)",
                           trimmed.names()[1] + " (pseudo-observation)",
                           "Pseudo-observations, N = " + std::to_string(ps.size())));
  }

  char line[256];
  std::snprintf(line, sizeof line, "%-18s %10s %12s %10s %12s %12s\n", "family", "theta_hat",
                "loglik", "CvMC", "AIC", "-2N*CIC");
  out << line;
  for (const auto& r : cmp.reports) {
    std::snprintf(line, sizeof line, "%-18s %10.4f %12.3f %10.4f %12.3f %12.3f\n",
                  r.label.c_str(), r.theta_hat, r.loglik, r.cvmc, r.aic, r.neg2n_cic);
    out << line;
  }
  for (const auto& w : cmp.warnings) out << "warning: " << w << '\n';
  return 0;
}

// -------------------------------------------------------------------------
// sample

struct SampleArgs {
  std::string family;
  double theta = 0.0;
  std::string kappa;
  int dimension = 2;
  long long n = 0;
  std::uint64_t seed = 1;
  std::string out = "sample.csv";
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  if (a.n < 1) raise(ErrorCode::PreconditionViolated, "--n must be >= 1");
  const auto model = model_from(a.family, a.theta, a.kappa, a.dimension);
  const RowMatrix draws = sample(model, static_cast<std::size_t>(a.n), a.seed);
  std::vector<std::string> header;
  for (std::size_t d = 0; d < draws.cols(); ++d) header.push_back("u" + std::to_string(d + 1));
  if (a.out == "-") {
    write_csv(out, header, draws);
    return 0;
  }
  std::ostringstream os;
  write_csv(os, header, draws);
  write_text(a.out, os.str());
  out << "wrote " << draws.rows() << " draws from " << model.describe() << " to " << a.out
      << '\n';
  return 0;
}

// -------------------------------------------------------------------------
// measures

struct MeasuresArgs {
  std::string family = "normal_mode";
  double theta = 0.0;
  std::string kappa;
  int nodes = 256;
  std::string out;
};

std::optional<MeasureSet> closed_form(const CopulaModel& m) {
  MeasureSet s;
  switch (m.family()) {
    case Family::NormalMode:
      return nm_measures(m.normal_mode_params());
    case Family::Product:
      return s;
    case Family::FrechetUpper:
      s.sigma = s.rho = s.tau = s.beta = s.gamma = s.footrule = 1.0;
      return s;
    case Family::FrechetLower:
      s.sigma = 1.0;
      s.rho = s.tau = s.beta = s.gamma = -1.0;
      s.footrule = -0.5;
      return s;
    default:
      return std::nullopt;
  }
}

int cmd_measures(const MeasuresArgs& a, std::ostream& out) {
  const auto model = model_from(a.family, a.theta, a.kappa, 2);
  const auto closed = closed_form(model);
  std::optional<MeasureSet> quad;
  if (has_density(model.family())) quad = measures_numeric(model, QuadSpec{a.nodes});
  Json doc;
  doc["version"] = NMCOPULA_VERSION;
  doc["model"] = model.describe();
  doc["closed_form"] = closed ? measures_json(*closed) : Json(nullptr);
  doc["quadrature"] = quad ? measures_json(*quad) : Json(nullptr);
  doc["max_gap"] = closed && quad ? number(max_abs_gap(*closed, *quad)) : Json(nullptr);
  const std::string text = doc.dump(2) + "\n";
  if (!a.out.empty()) write_text(a.out, text);
  out << text;
  return 0;
}

// -------------------------------------------------------------------------
// grid

struct GridArgs {
  std::string family = "normal_mode";
  double theta = 1.0;
  std::string kappa = "1,1";
  std::string preset;
  int resolution = 200;
  std::string out = ".";
  std::string formats = "csv,svg";
};

CopulaModel grid_model(const GridArgs& a) {
  if (a.preset.empty()) return model_from(a.family, a.theta, a.kappa, 2);
  // The four normal mode panels: (theta, kappa1, kappa2).
  if (a.preset == "fig2a") return CopulaModel::normal_mode(1.0, {1, 1});
  if (a.preset == "fig2b") return CopulaModel::normal_mode(-1.0, {1, 1});
  if (a.preset == "fig2c") return CopulaModel::normal_mode(1.0, {1, 2});
  if (a.preset == "fig2d") return CopulaModel::normal_mode(1.0, {2, 2});
  raise(ErrorCode::InvalidParameter,
        "unknown preset '" + a.preset + "' (fig2a, fig2b, fig2c, fig2d)");
}

int cmd_grid(const GridArgs& a, std::ostream& out) {
  const auto formats = parse_formats(a.formats);
  if (a.resolution < 16 || a.resolution > 1024) {
    raise(ErrorCode::InvalidParameter, "--resolution must lie in [16, 1024]");
  }
  const auto model = grid_model(a);
  const RowMatrix grid = density_grid(model, a.resolution);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  if (wants(formats, "csv")) {
    // Row j holds u2 = (j + 1/2)/res; columns run over u1.
    std::ostringstream os;
    os << "u2\\u1";
    for (int i = 0; i < a.resolution; ++i) os << ',' << format_double((i + 0.5) / a.resolution);
    os << '\n';
    for (int j = 0; j < a.resolution; ++j) {
      os << format_double((j + 0.5) / a.resolution);
      for (int i = 0; i < a.resolution; ++i) os << ',' << format_double(grid(i, j));
      os << '\n';
    }
    write_text(dir / "grid.csv", os.str());
  }
  if (wants(formats, "svg")) {
    write_text(dir / "heatmap.svg", heatmap_svg(grid, "Density of " + model.describe()));
  }
  out << "wrote " << a.resolution << "x" << a.resolution << " density grid of "
      << model.describe() << " to " << dir.string() << '\n';
  return 0;
}

// -------------------------------------------------------------------------
// simulate-study

struct StudyArgs {
  std::string scenario;
  std::string out = ".";
  unsigned threads = 1;
};

int cmd_study(const StudyArgs& a, std::ostream& out) {
  std::ifstream in(a.scenario);
  if (!in) raise(ErrorCode::FileNotFound, "cannot open " + a.scenario);
  Json spec;
  try {
    spec = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, a.scenario + ": " + e.what());
  }
  if (!spec.contains("scenarios") || !spec["scenarios"].is_array() ||
      spec["scenarios"].empty()) {
    raise(ErrorCode::PreconditionViolated, "scenario file lists no scenarios");
  }

  Json doc;
  doc["version"] = NMCOPULA_VERSION;
  doc["scenarios"] = Json::array();
  for (const auto& sc : spec["scenarios"]) {
    try {
      const std::string family = sc.value("family", "normal_mode");
      const double theta = sc.value("theta", 0.0);
      const std::vector<int> kappa = sc.value("kappa", std::vector<int>{});
      const std::size_t n = sc.value("n", std::size_t{2000});
      const int seeds = sc.value("seeds", 20);
      const std::uint64_t first_seed = sc.value("first_seed", std::uint64_t{1});
      const std::string name = sc.value("name", family);
      if (seeds < 1 || n < kMinFitRows) {
        raise(ErrorCode::PreconditionViolated, name + ": need seeds >= 1 and n >= 20");
      }
      const auto model = CopulaModel::make(require_family(family), theta, kappa);
      std::vector<int> fit_kappa = sc.value("fit_kappa", std::vector<int>{});
      if (fit_kappa.empty()) {
        fit_kappa = model.family() == Family::NormalMode
                        ? std::vector<int>(model.kappa().begin(), model.kappa().end())
                        : std::vector<int>{1, 1};
      }
      const auto specs = standard_specs(fit_kappa);

      std::map<std::string, int> wins_cvmc, wins_aic, wins_cic;
      for (const auto& s : specs) wins_cvmc[s.label()] = wins_aic[s.label()] = wins_cic[s.label()] = 0;
      Json per_seed = Json::array();
      for (int k = 0; k < seeds; ++k) {
        const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(k);
        const PseudoSample ps = pseudo_observations(RawSample(sample(model, n, seed)));
        const auto cmp = compare_models(specs, ps, CompareOptions{Criterion::CIC, a.threads});
        ++wins_cvmc[cmp.rank_cvmc.front()];
        ++wins_aic[cmp.rank_aic.front()];
        ++wins_cic[cmp.rank_cic.front()];
        per_seed.push_back(Json{{"seed", seed},
                                {"winner", Json{{"cvmc", cmp.rank_cvmc.front()},
                                                {"aic", cmp.rank_aic.front()},
                                                {"neg2n_cic", cmp.rank_cic.front()}}}});
      }
      const auto to_json = [&](const std::map<std::string, int>& wins) {
        Json j = Json::object();
        for (const auto& s : specs) j[s.label()] = wins.at(s.label());
        return j;
      };
      doc["scenarios"].push_back(Json{{"name", name},
                                      {"generator", model.describe()},
                                      {"n", n},
                                      {"seeds", seeds},
                                      {"first_seed", first_seed},
                                      {"fit_kappa", fit_kappa},
                                      {"wins", Json{{"cvmc", to_json(wins_cvmc)},
                                                    {"aic", to_json(wins_aic)},
                                                    {"neg2n_cic", to_json(wins_cic)}}},
                                      {"per_seed", per_seed}});
      out << name << " (" << model.describe() << ", N=" << n << ", " << seeds << " seeds)\n";
      for (const auto& s : specs) {
        char line[160];
        std::snprintf(line, sizeof line, "  %-18s wins cvmc %3d  aic %3d  -2N*cic %3d\n",
                      s.label().c_str(), wins_cvmc[s.label()], wins_aic[s.label()],
                      wins_cic[s.label()]);
        out << line;
      }
    } catch (const nlohmann::json::exception& e) {
      raise(ErrorCode::ParseError, a.scenario + ": " + e.what());
    }
  }
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_text(dir / "study.json", doc.dump(2) + "\n");
  return 0;
}

// Exact cos(k pi (2m + 1) / (2 res)) on the midpoint lattice: the integer
// phase is reduced to [0, res] before the single cosine call.
double lattice_cos(long long kappa, long long m, long long res) {
  long long p = (kappa * (2 * m + 1)) % (4 * res);  // angle = pi p / (2 res)
  if (p > 2 * res) p = 4 * res - p;                  // cos is even, period 4 res
  double sign = 1.0;
  if (p > res) {                                     // cos(pi - x) = -cos(x)
    p = 2 * res - p;
    sign = -1.0;
  }
  return sign * std::cos(std::numbers::pi * static_cast<double>(p) /
                         (2.0 * static_cast<double>(res)));
}

}  // namespace

RowMatrix density_grid(const CopulaModel& model, int resolution) {
  if (resolution < 1) raise(ErrorCode::InvalidParameter, "resolution must be >= 1");
  if (model.dimension() != 2) raise(ErrorCode::DimensionMismatch, "density grid is bivariate");
  const auto res = static_cast<std::size_t>(resolution);
  RowMatrix grid(res, res);
  if (model.family() == Family::NormalMode) {
    const auto k = model.kappa();
    for (std::size_t i = 0; i < res; ++i) {
      const double c1 = lattice_cos(k[0], static_cast<long long>(i), resolution);
      for (std::size_t j = 0; j < res; ++j) {
        const double c2 = lattice_cos(k[1], static_cast<long long>(j), resolution);
        grid(i, j) = std::max(0.0, 1.0 + model.theta() * c1 * c2);
      }
    }
    return grid;
  }
  for (std::size_t i = 0; i < res; ++i) {
    for (std::size_t j = 0; j < res; ++j) {
      grid(i, j) = density(model, (i + 0.5) / resolution, (j + 0.5) / resolution);
    }
  }
  return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"nmcopula: normal mode and classical copula toolkit", "nmcopula"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", NMCOPULA_VERSION);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit and compare copula families on a CSV");
  fit_cmd->add_option("--input", fit.input, "CSV file with a header row")->required();
  fit_cmd->add_option("--columns", fit.columns, "Two columns by name or 1-based index");
  fit_cmd->add_option("--families", fit.families, "Comma-separated families")
      ->capture_default_str();
  fit_cmd->add_option("--kappa", fit.kappa, "Normal mode numbers k1,k2")->capture_default_str();
  fit_cmd->add_option("--kappa-sweep", fit.kappa_sweep,
                      "Fit every normal mode (k1, k2) with k1, k2 <= K (K <= 8)");
  fit_cmd->add_option("--trim", fit.trim, "Per-column quantile trim lo,hi")->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "Seed (recorded in the report)")->capture_default_str();
  fit_cmd->add_option("--out", fit.out, "Output directory")->capture_default_str();
  fit_cmd->add_option("--formats", fit.formats, "json,csv,svg")->capture_default_str();
  fit_cmd->add_option("--criterion", fit.criterion, "Ranking: cvmc, aic or cic")
      ->capture_default_str();
  fit_cmd->add_option("--threads", fit.threads, "Worker threads for CIC folds");

  SampleArgs smp;
  auto* sample_cmd = app.add_subcommand("sample", "Draw from a copula into a CSV");
  sample_cmd->add_option("--family", smp.family, "Copula family")->required();
  sample_cmd->add_option("--theta", smp.theta, "Parameter");
  sample_cmd->add_option("--kappa", smp.kappa, "Normal mode numbers, one per dimension");
  sample_cmd->add_option("--dimension", smp.dimension, "Dimension for product/frechet_upper");
  sample_cmd->add_option("--n", smp.n, "Number of draws")->required();
  sample_cmd->add_option("--seed", smp.seed, "Seed")->capture_default_str();
  sample_cmd->add_option("--out", smp.out, "Output CSV path, '-' for stdout")
      ->capture_default_str();

  MeasuresArgs ms;
  auto* measures_cmd =
      app.add_subcommand("measures", "Closed-form and quadrature association measures");
  measures_cmd->add_option("--family", ms.family, "Copula family")->capture_default_str();
  measures_cmd->add_option("--theta", ms.theta, "Parameter");
  measures_cmd->add_option("--kappa", ms.kappa, "Normal mode numbers k1,k2");
  measures_cmd->add_option("--nodes", ms.nodes, "Quadrature nodes per axis")
      ->capture_default_str();
  measures_cmd->add_option("--out", ms.out, "Also write the JSON here");

  GridArgs gr;
  auto* grid_cmd = app.add_subcommand("grid", "Density grid CSV and heatmap SVG");
  grid_cmd->add_option("--family", gr.family, "Copula family")->capture_default_str();
  grid_cmd->add_option("--theta", gr.theta, "Parameter")->capture_default_str();
  grid_cmd->add_option("--kappa", gr.kappa, "Normal mode numbers k1,k2")->capture_default_str();
  grid_cmd->add_option("--preset", gr.preset, "fig2a, fig2b, fig2c or fig2d");
  grid_cmd->add_option("--resolution", gr.resolution, "Grid points per axis, 16..1024")
      ->capture_default_str();
  grid_cmd->add_option("--out", gr.out, "Output directory")->capture_default_str();
  grid_cmd->add_option("--formats", gr.formats, "csv,svg")->capture_default_str();

  StudyArgs st;
  auto* study_cmd =
      app.add_subcommand("simulate-study", "Repeat the six-family comparison over seeds");
  study_cmd->add_option("--scenario", st.scenario, "Scenario JSON file")->required();
  study_cmd->add_option("--out", st.out, "Output directory")->capture_default_str();
  study_cmd->add_option("--threads", st.threads, "Worker threads for CIC folds");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every usage error exits 1.
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit, out);
    if (*sample_cmd) return cmd_sample(smp, out);
    if (*measures_cmd) return cmd_measures(ms, out);
    if (*grid_cmd) return cmd_grid(gr, out);
    if (*study_cmd) return cmd_study(st, out);
  } catch (const CopulaError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace nmcopula::cli
