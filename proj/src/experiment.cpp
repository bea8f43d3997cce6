// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpjacobi/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "mpjacobi/error.hpp"
#include "mpjacobi/matrix_io.hpp"
#include "mpjacobi/metrics.hpp"

namespace mpjacobi {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::invalid_argument, "experiment spec: " + what); }

std::vector<double> numeric_axis(const std::string& key, const json& v) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number()) invalid("'" + key + "' must hold numbers");
      out.push_back(x.get<double>());
    }
  } else if (v.is_object() && v.contains("logspace") && v.size() == 1) {
    const auto& ls = v["logspace"];
    if (!ls.is_array() || ls.size() != 3 || !ls[0].is_number() || !ls[1].is_number() || !ls[2].is_number_integer()) {
      invalid("'" + key + "': logspace needs [lo, hi, count]");
    }
    const double lo = ls[0].get<double>(), hi = ls[1].get<double>();
    const auto count = ls[2].get<long long>();
    if (count < 1) invalid("'" + key + "': logspace count must be positive");
    for (long long i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(std::pow(10.0, lo + t * (hi - lo)));
    }
  } else {
    invalid("'" + key + "' must be a number, a list, or {\"logspace\": [...]}");
  }
  if (out.empty()) invalid("'" + key + "' is empty");
  return out;
}

MatrixSpec parse_matrix(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) invalid("every matrix needs a string 'kind'");
  MatrixSpec s;
  s.kind = j["kind"].get<std::string>();
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") continue;
    if (key == "path") {
      if (!value.is_string()) invalid("'path' must be a string");
      s.path = value.get<std::string>();
      continue;
    }
    s.params[key] = numeric_axis(key, value);
  }
  if (s.kind == "file") {
    if (s.path.empty()) invalid("file matrices need 'path'");
  } else if (s.kind != "randsvd" && s.kind != "kahan" && s.kind != "lauchli-gram" && s.kind != "identity") {
    invalid("unknown matrix kind '" + s.kind + "'");
  }
  if (auto it = s.params.find("kappa"); it != s.params.end()) {
    for (double k : it->second) {
      if (!(k >= 1.0)) invalid("kappa values must be >= 1");
    }
  }
  return s;
}

/// All combinations of the list-valued parameters, last key varying fastest.
std::vector<GalleryParams> expand(const MatrixSpec& s) {
  std::vector<GalleryParams> out{GalleryParams{}};
  for (const auto& [key, values] : s.params) {
    std::vector<GalleryParams> next;
    next.reserve(out.size() * values.size());
    for (const auto& base : out) {
      for (double v : values) {
        auto p = base;
        p[key] = v;
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

struct Task {
  const MatrixSpec* spec;
  GalleryParams params;
  std::uint64_t seed;
  std::uint64_t matrix_seed;
  std::size_t first_row;
};

struct Truth {
  std::vector<DoubleDouble> sigma;
};

bool is_mp3(Algorithm a) { return a != Algorithm::plain && a != Algorithm::plain_qr_first; }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void fill_failed(ExperimentRow& r, const std::string& msg) {
  r.max_ferr = r.bound = r.off_before = r.off_after = r.obliq_after = r.kappa2d_before = r.kappa2d_after = kNaN;
  r.converged = false;
  r.bound_ok = false;
  r.error = msg;
}

void run_task(const ExperimentSpec& spec, const Task& t, std::vector<ExperimentRow>& rows) {
  const bool ssd = spec.config.working == Format::binary32;
  GalleryMatrix g;
  std::vector<DoubleDouble> truth;
  std::string setup_error;
  try {
    if (t.spec->kind == "file") {
      g.a = read_matrix_file(t.spec->path);
      g.kind = GalleryKind::file;
      const auto sidecar = t.spec->path + ".sigma";
      if (std::filesystem::exists(sidecar)) g.sigma_true = read_sigma_file(sidecar);
    } else {
      g = make_gallery(t.spec->kind, t.params, t.matrix_seed);
    }
    const bool closed_form = g.kind == GalleryKind::lauchli_gram || g.kind == GalleryKind::identity;
    const bool use_given = g.sigma_true && ((closed_form && !ssd) || spec.truth == TruthChoice::construction);
    if (use_given) {
      truth = *g.sigma_true;
    } else if (ssd) {
      truth = reference_svd(convert<float>(g.a));
    } else {
      truth = reference_svd(g.a);
    }
  } catch (const Error& e) {
    setup_error = e.what();
  }

  for (std::size_t k = 0; k < spec.methods.size(); ++k) {
    ExperimentRow& r = rows[t.first_row + k];
    const Algorithm alg = spec.methods[k];
    r.kind = t.spec->kind;
    r.m = g.a.rows();
    r.n = g.a.cols();
    if (auto it = t.params.find("kappa"); it != t.params.end() && t.spec->kind == "randsvd") r.kappa_target = it->second;
    if (auto it = t.params.find("mode"); it != t.params.end() && t.spec->kind == "randsvd") {
      r.mode = static_cast<int>(it->second);
    } else if (t.spec->kind == "randsvd") {
      r.mode = 3;
    }
    r.seed = t.seed;
    r.method = std::string(to_string(alg));
    r.config = spec.config.name;
    if (!setup_error.empty()) {
      fill_failed(r, setup_error);
      continue;
    }
    SvdRequest req;
    req.algorithm = alg;
    req.config = spec.config;
    req.jacobi = spec.jacobi;
    req.qr_ratio = spec.qr_ratio;
    req.diagnostics = spec.diagnostics;
    try {
      const auto start = std::chrono::steady_clock::now();
      const auto out = run_svd(g.a, req);
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      const auto& d = out.diag;
      auto rep = forward_errors(out.sigma, truth);
      attach_bound(rep, r.m, r.n, out.working_unit_roundoff, is_mp3(alg) ? d.kappa2d_after : d.kappa2d_before);
      r.max_ferr = rep.max_forward_error;
      r.bound = *rep.bound_value;
      r.bound_ok = rep.bound_satisfied;
      r.sweeps = d.jacobi_sweeps;
      r.rotations = d.jacobi_rotations;
      r.off_before = d.off_before;
      r.off_after = d.off_after;
      r.obliq_after = d.obliq_after;
      r.kappa2d_before = d.kappa2d_before;
      r.kappa2d_after = d.kappa2d_after;
      r.used_qr = d.used_qr;
      r.converged = d.converged;
    } catch (const Error& e) {
      fill_failed(r, e.what());
    }
  }
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string("experiment spec: ") + e.what());
  }
  if (!j.is_object()) invalid("top level must be an object");
  ExperimentSpec s;
  for (const auto& [key, value] : j.items()) {
    if (key == "config") {
      if (!value.is_string()) invalid("'config' must be a string");
      s.config = parse_config(value.get<std::string>());
    } else if (key == "methods") {
      if (!value.is_array()) invalid("'methods' must be a list");
      for (const auto& m : value) {
        if (!m.is_string()) invalid("method names must be strings");
        s.methods.push_back(parse_algorithm(m.get<std::string>()));
      }
    } else if (key == "seeds") {
      if (!value.is_array()) invalid("'seeds' must be a list");
      s.seeds.clear();
      for (const auto& x : value) {
        if (!x.is_number_unsigned()) invalid("seeds must be non-negative integers");
        s.seeds.push_back(x.get<std::uint64_t>());
      }
    } else if (key == "matrices") {
      if (!value.is_array()) invalid("'matrices' must be a list");
      for (const auto& m : value) s.matrices.push_back(parse_matrix(m));
    } else if (key == "truth") {
      const auto v = value.is_string() ? value.get<std::string>() : "";
      if (v == "reference") {
        s.truth = TruthChoice::reference;
      } else if (v == "construction") {
        s.truth = TruthChoice::construction;
      } else {
        invalid("'truth' must be \"reference\" or \"construction\"");
      }
    } else if (key == "diagnostics") {
      const auto v = value.is_string() ? value.get<std::string>() : "";
      if (v == "estimated") {
        s.diagnostics = DiagnosticsLevel::estimated;
      } else if (v == "reference") {
        s.diagnostics = DiagnosticsLevel::reference;
      } else {
        invalid("'diagnostics' must be \"estimated\" or \"reference\"");
      }
    } else if (key == "tol") {
      if (!value.is_number()) invalid("'tol' must be a number");
      s.jacobi.tol = value.get<double>();
    } else if (key == "max_sweeps") {
      if (!value.is_number_integer() || value.get<long long>() < 1) invalid("'max_sweeps' must be a positive integer");
      s.jacobi.max_sweeps = value.get<int>();
    } else if (key == "qr_ratio") {
      if (!value.is_number() || !(value.get<double>() > 0.0)) invalid("'qr_ratio' must be positive");
      s.qr_ratio = value.get<double>();
    } else if (key != "name" && key != "description") {
      invalid("unknown key '" + key + "'");
    }
  }
  if (s.methods.empty()) invalid("'methods' is empty");
  if (s.seeds.empty()) invalid("'seeds' is empty");
  if (s.matrices.empty()) invalid("'matrices' is empty");
  return s;
}

unsigned default_thread_count() {
  unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MPJACOBI_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return std::min(hw, static_cast<unsigned>(v));
  }
  return hw;
}

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec, unsigned threads) {
  std::vector<Task> tasks;
  std::uint64_t combo = 0;
  std::size_t row = 0;
  for (const auto& m : spec.matrices) {
    for (auto& params : expand(m)) {
      for (auto seed : spec.seeds) {
        tasks.push_back({&m, params, seed, derive_seed(seed, combo), row});
        row += spec.methods.size();
      }
      ++combo;
    }
  }
  std::vector<ExperimentRow> rows(row);
  if (threads == 0) threads = default_thread_count();
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(tasks.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) run_task(spec, tasks[i], rows);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return rows;
}

const std::string& csv_header() {
  static const std::string h =
      "kind,m,n,kappa_target,mode,seed,method,config,max_ferr,bound,bound_ok,sweeps,rotations,off_before,"
      "off_after,obliq_after,kappa2d_before,kappa2d_after,used_qr,converged,wall_ms";
  return h;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << csv_header() << '\n';
  char ms[32];
  for (const auto& r : rows) {
    std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
    out << r.kind << ',' << r.m << ',' << r.n << ',' << (r.kappa_target ? fmt(*r.kappa_target) : "") << ','
        << (r.mode ? std::to_string(*r.mode) : "") << ',' << r.seed << ',' << r.method << ',' << r.config << ','
        << fmt(r.max_ferr) << ',' << fmt(r.bound) << ',' << (r.bound_ok ? "true" : "false") << ',' << r.sweeps << ','
        << r.rotations << ',' << fmt(r.off_before) << ',' << fmt(r.off_after) << ',' << fmt(r.obliq_after) << ','
        << fmt(r.kappa2d_before) << ',' << fmt(r.kappa2d_after) << ',' << (r.used_qr ? "true" : "false") << ','
        << (r.converged ? "true" : "false") << ',' << ms << '\n';
  }
}

}  // namespace mpjacobi
