#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

#include "app.hpp"
#include "table.hpp"

namespace lambda_pt::cli {

namespace {

// Writes to cfg.out when set, else to stdout.
void emit(const Table& table, const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) {
    table.write(out, cfg.format);
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + cfg.out + "'");
  table.write(file, cfg.format);
}

void append_complex(std::vector<Cell>& row, Complex z) {
  row.emplace_back(z.real());
  row.emplace_back(z.imag());
}

bool overflowed(const Trajectory& traj) {
  return std::any_of(traj.amplitudes.begin(), traj.amplitudes.end(),
                     [](const CVec3& a) { return !a.finite() || a.max_abs() > kOverflowGuard; });
}

}  // namespace

unsigned sweep_thread_count() {
  unsigned n = 0;
  if (const char* env = std::getenv("LAMBDA_PT_THREADS")) {
    n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const PtParams q = cfg.pt();
  const Regime regime = classify_regime(q);
  const auto ev = eigenvalues(q);
  const bool at_ep = regime.tag == RegimeTag::ExceptionalPoint;
  const bool with_metric = cfg.metric && !at_ep;

  Table table;
  table.columns = {"gamma_pt", "v", "hbar", "regime", "discriminant", "re_e0", "im_e0",
                   "re_e_plus", "im_e_plus", "re_e_minus", "im_e_minus"};
  std::vector<Cell> row{q.gamma_pt(), q.v(), q.hbar(), std::string(to_string(regime.tag)), regime.discriminant};
  for (const auto& e : ev) append_complex(row, e);

  if (with_metric) {
    const SpectralData s = spectral_data(q);
    const CMat3 h = build_pt_hamiltonian(q);
    for (int r = 1; r <= 3; ++r) {
      for (int c = 1; c <= 3; ++c) {
        table.columns.push_back("re_eta" + std::to_string(r) + std::to_string(c));
        table.columns.push_back("im_eta" + std::to_string(r) + std::to_string(c));
        append_complex(row, s.eta(r - 1, c - 1));
      }
    }
    table.columns.insert(table.columns.end(),
                         {"orthonormality_deviation", "pseudo_hermiticity_residual", "eta_positive_definite"});
    row.emplace_back(verify_metric_orthonormality(s.eta, s.d_matrix));
    row.emplace_back(pseudo_hermiticity_residual(h, s.eta, s.eta_inv));
    row.emplace_back(is_positive_definite(s.eta, 1e-10 * s.eta.max_abs()));
  }
  table.add_row(std::move(row));
  emit(table, cfg, out);

  if (cfg.metric && at_ep) {
    err << "lambda-pt: exceptional point (2v^2 - gamma_pt^2 = " << format_double(regime.discriminant)
        << "): eigenvectors coalesce, the similarity matrix is singular and no metric exists; "
           "metric omitted\n";
    return kExitExceptionalPoint;
  }
  return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const PtParams q = cfg.pt();
  Trajectory traj;
  if (cfg.method == "rk4") {
    const IntegratorConfig icfg{cfg.dt.value_or(recommended_dt(q)), cfg.t_end, cfg.record_stride};
    try {
      icfg.validate();
    } catch (const InvalidParams& e) {
      throw ConfigError(e.what());
    }
    traj = rk4_effective(q, cfg.b0, icfg);
  } else {
    traj = evolve_b(q, cfg.b0, linspace(0.0, cfg.t_end, cfg.samples));
  }
  if (overflowed(traj)) {
    err << "lambda-pt: amplitude overflow (|b| > " << format_double(kOverflowGuard)
        << "); shorten t_end for broken-regime parameters\n";
    return kExitOverflow;
  }

  Table table;
  table.columns = {"t", "re_b1", "im_b1", "re_b2", "im_b2", "re_b3", "im_b3", "pop1", "pop2", "pop3", "frame"};
  auto add = [&](const Trajectory& tr) {
    for (std::size_t k = 0; k < tr.size(); ++k) {
      std::vector<Cell> row{tr.times[k]};
      for (std::size_t i = 0; i < 3; ++i) append_complex(row, tr.amplitudes[k][i]);
      for (std::size_t i = 0; i < 3; ++i) row.emplace_back(std::norm(tr.amplitudes[k][i]));
      row.emplace_back(std::string(to_string(tr.frame)));
      table.add_row(std::move(row));
    }
  };
  add(traj);
  if (cfg.has_system()) {
    try {
      add(to_lab_frame(traj, cfg.system));
    } catch (const InvalidParams& e) {
      throw ConfigError(std::string("lab frame: ") + e.what());
    }
  }
  emit(table, cfg, out);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const double fixed_gamma = cfg.pt_only ? cfg.gamma_pt : 0.5 * (cfg.system.gamma1 - cfg.system.gamma3);
  const double fixed_v = cfg.pt_only ? cfg.v : cfg.system.v_p;
  const bool sweep_v = cfg.sweep_param == "v";
  const auto grid = linspace(cfg.sweep_min, cfg.sweep_max, cfg.sweep_points);

  struct Point {
    Complex e_plus;
    RegimeTag tag;
  };
  std::vector<Point> points(grid.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double g = sweep_v ? fixed_gamma : grid[k];
      const double v = sweep_v ? grid[k] : fixed_v;
      const double tol = std::max(1e-10 * std::max(v * v, g * g), 1e-300);
      points[k] = {pt_energy(g, v), classify_regime(g, v, tol).tag};
    }
  };
  const std::size_t n_threads = std::min<std::size_t>(sweep_thread_count(), grid.size());
  const std::size_t chunk = (grid.size() + n_threads - 1) / n_threads;
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) {
    pool.emplace_back(work, std::min(t * chunk, grid.size()), std::min((t + 1) * chunk, grid.size()));
  }
  work(0, std::min(chunk, grid.size()));
  for (auto& th : pool) th.join();

  Table table;
  table.columns = {cfg.sweep_param, "re_e_plus", "im_e_plus", "regime"};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    table.add_row({grid[k], points[k].e_plus.real(), points[k].e_plus.imag(), std::string(to_string(points[k].tag))});
  }
  emit(table, cfg, out);
  return kExitOk;
}

namespace {

Table fig2_table(const SystemParams& p, double t_end) {
  const Trajectory lab = to_lab_frame(evolve_b(PtParams::from(p), CVec3::unit(0), linspace(0.0, t_end, 4096)), p);
  const auto pops = populations(lab);
  Table table;
  table.columns = {"t", "pop1", "pop2", "pop3"};
  for (std::size_t k = 0; k < lab.size(); ++k) table.add_row({lab.times[k], pops[0][k], pops[1][k], pops[2][k]});
  return table;
}

}  // namespace

int cmd_fig2(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SystemParams a;
  a.gamma1 = 0.002;
  a.gamma2 = 0.0015;
  a.gamma3 = 0.001;
  a.v_p = a.v_c = 0.025;
  SystemParams b;
  b.gamma1 = 0.02;
  b.gamma2 = 0.015;
  b.gamma3 = 0.01;
  b.v_p = b.v_c = 0.25;

  auto fa = std::async(std::launch::async, fig2_table, a, 1500.0);
  const Table tb = fig2_table(b, 150.0);
  const Table ta = fa.get();

  const std::filesystem::path dir = cfg.out.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const char* ext = cfg.format == OutputFormat::Csv ? ".csv" : ".json";
  for (const auto& [name, table] : {std::pair{"fig2a", &ta}, std::pair{"fig2b", &tb}}) {
    const auto path = dir / (std::string(name) + ext);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file '" + path.string() + "'");
    table->write(file, cfg.format);
    out << "wrote " << path.string() << " (" << table->rows.size() << " rows)\n";
  }
  (void)err;
  return kExitOk;
}

}  // namespace lambda_pt::cli
