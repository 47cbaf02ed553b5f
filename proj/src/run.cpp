#include "plateau/run.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "plateau/analysis.hpp"
#include "plateau/error.hpp"
#include "plateau/optimizer.hpp"

namespace plateau {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::IoError, "sha256", "digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 15];
  }
  return out;
}

Manifest::Manifest(fs::path dir) : dir_(std::move(dir)) {
  std::ifstream in(dir_ / "MANIFEST");
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "stage") {
      std::string rest;
      std::getline(ls >> std::ws, rest);
      stages_.push_back(rest);
    } else if (tag == "file") {
      File f;
      std::string hash;
      if (ls >> f.name >> f.size >> hash && hash.rfind("sha256:", 0) == 0) {
        f.sha256 = hash.substr(7);
        files_.push_back(f);
      }
    }
  }
}

void Manifest::stage(const std::string& name) {
  std::erase(stages_, name);
  stages_.push_back(name);
}

void Manifest::emit(const std::string& name, const std::string& content) {
  const fs::path path = dir_ / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw Error(ErrorKind::IoError, path.string(), "write failed");
  std::erase_if(files_, [&](const File& f) { return f.name == name; });
  files_.push_back({name, content.size(), sha256_hex(content)});
}

void Manifest::write() const {
  std::ofstream out(dir_ / "MANIFEST", std::ios::binary);
  for (const auto& s : stages_) out << "stage " << s << "\n";
  for (const auto& f : files_) out << "file " << f.name << ' ' << f.size << " sha256:" << f.sha256 << "\n";
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "iter,dirichlet,potential,surface,total,area,lipschitz,ahlfors_sup\n";
  for (const TraceRow& r : trace) {
    out << r.iter << ',' << fmt(r.energy.dirichlet) << ',' << fmt(r.energy.potential) << ','
        << fmt(r.energy.surface) << ',' << fmt(r.energy.total) << ',' << fmt(r.area) << ',' << fmt(r.lipschitz)
        << ',' << fmt(r.ahlfors_sup) << '\n';
  }
  return out.str();
}

std::string lemma_row(const LemmaReport& r) {
  std::string params;
  for (const auto& [k, v] : r.params) params += (params.empty() ? "" : ";") + k + "=" + fmt(v);
  return r.lemma + ',' + std::to_string(r.tested) + ',' + std::to_string(r.violations) + ',' +
         fmt(r.worst_margin) + ',' + fmt(r.value) + ',' + (r.hypothesis_met ? "1" : "0") + ',' + params + ',' +
         r.note + '\n';
}

void summarize(std::ostream& log, const LemmaReport& r) {
  log << "  " << r.lemma << ": " << r.violations << "/" << r.tested << " violations, worst margin "
      << fmt(r.worst_margin) << ", value " << fmt(r.value) << (r.hypothesis_met ? "" : " [hypothesis 11eps<eta0/4 unmet]")
      << (r.note.empty() ? "" : "  (" + r.note + ")") << '\n';
}

std::string to_text(const HomotopySheet& s) {
  std::ostringstream out;
  write_obj(out, s);
  return out.str();
}

std::string to_text(const PhaseField& u) {
  std::ostringstream out;
  write_vtk(out, u);
  return out.str();
}

void run_solve(const RunConfig& c, Manifest& m, std::ostream& log) {
  const Domain domain = make_domain(*c.domain);
  RunOptions opt;
  opt.M = c.M;
  opt.K = c.K;
  opt.monitor_ahlfors = c.monitor_ahlfors;
  opt.ahlfors_levels = c.ahlfors_levels;
  opt.on_iteration = [&](const TraceRow& r) {
    log << "iter " << r.iter << " total " << fmt(r.energy.total) << " area " << fmt(r.area) << '\n';
  };
  const RunResult res = alternate_minimize(domain, c.curves[0], c.curves[1], c.params, opt);
  log << "termination " << to_string(res.reason) << " after " << res.trace.size() << " iterations\n";
  m.emit("trace.csv", trace_csv(res.trace));
  m.emit("final.obj", to_text(res.sheet));
  m.emit("field.vtk", to_text(res.u));
  m.stage("solve");
}

void run_analyze(const RunConfig& c, Manifest& m, std::ostream& log) {
  const fs::path dir(c.out_dir);
  for (const char* name : {"final.obj", "field.vtk"}) {
    if (!fs::exists(dir / name)) {
      throw Error(ErrorKind::IoError, (dir / name).string(), "missing; run solve first");
    }
  }
  std::ifstream obj(dir / "final.obj"), vtk(dir / "field.vtk");
  const HomotopySheet sheet = read_obj(obj);
  const PhaseField u = read_vtk(vtk);
  const Domain domain = make_domain(*c.domain);
  const double eps = c.params.epsilon;

  std::vector<LemmaReport> reports;
  reports.push_back(decay_profile(u, sheet, eps, domain.eta0));
  reports.push_back(gradient_decay(u, sheet, eps, domain.eta0));
  LemmaReport holder = holder_quotient(u, c.alpha, c.pairs, c.seed);
  holder.params.emplace_back("normalized", holder_normalized(holder.value, eps, c.alpha, c.params.lambda_cap,
                                                             c.params.c_eps));
  reports.push_back(holder);

  const double diam = bounding_diameter(sheet.vertices());
  LemmaReport ahl;
  ahl.lemma = "ahlfors";
  if (diam > 0.0) {
    const AhlforsReport a = ahlfors_ratio(sheet, RadiusSequence{diam / 8.0, c.ahlfors_levels});
    ahl.tested = static_cast<long>(sheet.vertices().size()) * c.ahlfors_levels;
    ahl.value = a.sup_ratio;
    ahl.worst_margin = a.sup_ratio - sheet.lambda_cap();
    ahl.violations = a.sup_ratio > sheet.lambda_cap() ? 1 : 0;
    ahl.note = a.note;
  }
  ahl.params = {{"lambda", sheet.lambda_cap()}, {"r_max", diam / 8.0}};
  reports.push_back(ahl);

  std::string csv = "lemma,tested,violations,worst_margin,value,hypothesis_met,params,note\n";
  log << "lemma checks (report-only):\n";
  for (const auto& r : reports) {
    csv += lemma_row(r);
    summarize(log, r);
  }
  m.emit("lemmas.csv", csv);
  m.stage("analyze");
}

void run_lsc(const RunConfig& c, Manifest& m, std::ostream& log) {
  const SheetSequence seq =
      c.generator == "wrinkle" ? wrinkle_sequence(c.annulus, c.terms) : bump_sequence(c.annulus, c.terms);
  const std::vector<TestBall> balls = annulus_test_balls(c.annulus);
  const LemmaReport lsc = lsc_harness(seq, balls);

  const TriangleMesh limit = to_mesh(seq.limit);
  const double limit_area = mesh_area(limit);
  std::vector<double> limit_ball;
  for (const TestBall& b : balls) limit_ball.push_back(ball_area_exact(limit, b.center, b.radius));

  const Disk disk{balls.front().center, balls.front().radius, Vec3::UnitZ()};
  std::ostringstream csv;
  csv << "n,sup_distance,area,limit_area,min_ball_ratio,lipschitz,coverage,tail\n";
  const std::size_t tail = seq.terms.size() / 2;
  for (std::size_t k = 0; k < seq.terms.size(); ++k) {
    const TriangleMesh mesh = to_mesh(seq.terms[k]);
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < balls.size(); ++b) {
      ratio = std::min(ratio, ball_area_exact(mesh, balls[b].center, balls[b].radius) / limit_ball[b]);
    }
    const double eta = seq.sup_distance[k] / disk.radius;
    double coverage = 1.0;
    try {
      coverage = disk_coverage(mesh, disk, eta);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::HypothesisUnmet) throw;
      coverage = std::numeric_limits<double>::quiet_NaN();
    }
    csv << seq.index[k] << ',' << fmt(seq.sup_distance[k]) << ',' << fmt(mesh_area(mesh)) << ','
        << fmt(limit_area) << ',' << fmt(ratio) << ',' << fmt(lipschitz_estimate(seq.terms[k])) << ','
        << fmt(coverage) << ',' << (k >= tail ? 1 : 0) << '\n';
  }
  m.emit("lsc.csv", csv.str());
  log << "sequence " << seq.generator << ", " << seq.terms.size() << " terms, shared lambda " << fmt(seq.lambda)
      << " (disk coverage uses C = " << kCoverageC << ", a harness constant)\n";
  summarize(log, lsc);
  log << "verdict " << (lsc.passed() ? "pass" : "fail") << '\n';
  m.stage("lsc-test");
}

void run_sweep(const RunConfig& c, Manifest& m, std::ostream& log) {
  const Domain domain = make_domain(*c.domain);
  std::ostringstream csv;
  csv << "epsilon,c_eps,delta_eps,iterations,termination,total,area,lipschitz,min_u,max_u\n";
  for (double eps : c.eps_list) {
    SolverParams p = c.params;
    p.epsilon = eps;
    if (!c.c_eps_set) p.c_eps = std::sqrt(eps);
    if (!c.delta_eps_set) p.delta_eps = eps;
    RunOptions opt;
    opt.M = c.M;
    opt.K = c.K;
    opt.monitor_ahlfors = false;
    const RunResult r = alternate_minimize(domain, c.curves[0], c.curves[1], p, opt);
    const TraceRow& last = r.trace.back();
    const auto [lo, hi] = std::minmax_element(r.u.values.begin(), r.u.values.end());
    csv << fmt(eps) << ',' << fmt(p.c_eps) << ',' << fmt(p.delta_eps) << ',' << r.trace.size() << ','
        << to_string(r.reason) << ',' << fmt(last.energy.total) << ',' << fmt(last.area) << ','
        << fmt(last.lipschitz) << ',' << fmt(*lo) << ',' << fmt(*hi) << '\n';
    log << "eps " << fmt(eps) << ": total " << fmt(last.energy.total) << " area " << fmt(last.area) << '\n';
    m.stage("sweep eps=" + fmt(eps));
  }
  m.emit("scaling.csv", csv.str());
}

}  // namespace

void run(const RunConfig& c, std::ostream& log) {
  fs::create_directories(c.out_dir);
  Manifest manifest(c.out_dir);
  try {
    switch (c.mode) {
      case Mode::Solve: run_solve(c, manifest, log); break;
      case Mode::Analyze: run_analyze(c, manifest, log); break;
      case Mode::LscTest: run_lsc(c, manifest, log); break;
      case Mode::Sweep: run_sweep(c, manifest, log); break;
    }
  } catch (...) {
    manifest.write();
    throw;
  }
  manifest.write();
}

}  // namespace plateau
