#include "lognls/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace lognls {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw Error("cannot create directory " + p.parent_path().string());
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

void close_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error("write failed for " + path);
}

nlohmann::ordered_json fit_json(const SlopeFit& f) {
  nlohmann::ordered_json j;
  j["slope"] = f.slope;
  j["intercept"] = f.intercept;
  j["r2"] = f.r2;
  j["n_used"] = f.n_used;
  return j;
}

}  // namespace

void emit_report(const std::vector<SweepRecord>& records, const std::vector<FitSummary>& fits,
                 const std::vector<CheckResult>& checks, const std::string& scenario,
                 const std::string& dir) {
  std::filesystem::path base(dir);
  {
    std::error_code ec;
    std::filesystem::create_directories(base, ec);
    if (ec) throw Error("cannot create directory " + dir);
  }

  const std::string csv_path = (base / "records.csv").string();
  std::ofstream csv = open_out(csv_path);
  csv << "eps,T,t,error,scenario,path,dt,delta,mass_drift\n";
  for (const SweepRecord& r : records) {
    if (r.times.size() != r.errors.size())
      throw ConstraintError("emit_report: record times/errors length mismatch");
    for (std::size_t m = 0; m < r.times.size(); ++m) {
      csv << format_double(r.eps) << ',' << format_double(r.T) << ','
          << format_double(r.times[m]) << ',' << format_double(r.errors[m]) << ','
          << r.scenario << ',' << r.path << ',' << format_double(r.dt) << ','
          << format_double(r.delta) << ',' << format_double(r.mass_drift) << '\n';
    }
  }
  close_out(csv, csv_path);

  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["record_count"] = records.size();
  j["fits"] = nlohmann::ordered_json::object();
  for (const FitSummary& f : fits) j["fits"][f.name] = fit_json(f.fit);
  j["checks"] = nlohmann::ordered_json::array();
  bool all_pass = true;
  for (const CheckResult& c : checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["value"] = c.value;
    cj["threshold"] = c.threshold;
    cj["comparison"] = c.invert ? ">=" : "<=";
    cj["pass"] = c.pass;
    j["checks"].push_back(cj);
    all_pass = all_pass && c.pass;
  }
  j["all_checks_pass"] = all_pass;
  nlohmann::ordered_json gates = nlohmann::ordered_json::array();
  for (const SweepRecord& r : records) {
    if (r.gate_diff >= 0.0) {
      nlohmann::ordered_json g;
      g["eps"] = r.eps;
      g["dt_gate_diff"] = r.gate_diff;
      gates.push_back(g);
    }
  }
  j["dt_gates"] = gates;

  const std::string json_path = (base / "summary.json").string();
  std::ofstream js = open_out(json_path);
  js << j.dump(2) << '\n';
  close_out(js, json_path);
}

void save_trajectory_csv(const Trajectory& tr, const Potential& V, const std::string& path) {
  std::ofstream out = open_out(path);
  out << 't';
  for (std::size_t j = 0; j < tr.dim; ++j) out << ",q" << j;
  for (std::size_t j = 0; j < tr.dim; ++j) out << ",p" << j;
  out << ",S,E\n";
  for (std::size_t i = 0; i < tr.samples(); ++i) {
    out << format_double(tr.time(i));
    for (std::size_t j = 0; j < tr.dim; ++j) out << ',' << format_double(tr.q_at(i, j));
    for (std::size_t j = 0; j < tr.dim; ++j) out << ',' << format_double(tr.p_at(i, j));
    std::vector<double> q(tr.dim), p(tr.dim);
    for (std::size_t j = 0; j < tr.dim; ++j) {
      q[j] = tr.q_at(i, j);
      p[j] = tr.p_at(i, j);
    }
    out << ',' << format_double(tr.S[i]) << ',' << format_double(energy(V, q, p)) << '\n';
  }
  close_out(out, path);
}

void save_closure_csv(const ClosurePath& cp, const std::string& path) {
  std::ofstream out = open_out(path);
  out << 't';
  for (std::size_t j = 0; j < cp.dim(); ++j)
    out << ",tau" << j << ",taudot" << j << ",re_a" << j << ",im_a" << j;
  out << ",re_b,im_b\n";
  for (std::size_t i = 0; i < cp.samples(); ++i) {
    out << format_double(static_cast<double>(i) * cp.dt);
    for (std::size_t j = 0; j < cp.dim(); ++j) {
      out << ',' << format_double(cp.axes[j].tau[i]) << ','
          << format_double(cp.axes[j].taudot[i]) << ','
          << format_double(cp.coeffs[j].a[i].real()) << ','
          << format_double(cp.coeffs[j].a[i].imag());
    }
    out << ',' << format_double(cp.b[i].real()) << ',' << format_double(cp.b[i].imag()) << '\n';
  }
  close_out(out, path);
}

}  // namespace lognls
