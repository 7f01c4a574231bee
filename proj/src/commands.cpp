#include "qdirac/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "qdirac/classical.hpp"
#include "qdirac/diagnostics.hpp"
#include "qdirac/dirac.hpp"
#include "qdirac/errors.hpp"
#include "qdirac/parametrix.hpp"

namespace qdirac {

namespace {

YAML::Node real(double v) { return YAML::Node(format_real(v)); }

YAML::Node header(const std::string& command, const ExperimentConfig& config,
                  const WeightFamily* family) {
  YAML::Node doc;
  doc["command"] = command;
  doc["config"] = YAML::Load(dump_config(config));
  doc["seed"] = config.seed;
  if (family) doc["family"] = family->name;
  return doc;
}

std::string emit(const YAML::Node& node) {
  YAML::Emitter out;
  out << node;
  return std::string(out.c_str()) + "\n";
}

// CSV text whose leading comment lines carry the command and full config.
class Table {
 public:
  Table(const std::string& command, const ExperimentConfig& config) {
    text_ << "# command: " << command << '\n';
    std::istringstream lines(dump_config(config));
    for (std::string line; std::getline(lines, line);) text_ << "# " << line << '\n';
  }
  Table& row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ << (i ? "," : "") << cells[i];
    text_ << '\n';
    return *this;
  }
  std::string str() const { return text_.str(); }

 private:
  std::ostringstream text_;
};

std::string flag(bool b) { return b ? "true" : "false"; }

YAML::Node verdict_node(const ConditionVerdict& v) {
  YAML::Node n;
  n["pass"] = v.pass;
  n["error"] = v.error ? std::string(to_string(*v.error)) : std::string("none");
  n["witness_n"] = v.witness_n;
  n["witness_k"] = static_cast<long long>(v.witness_k);
  n["detail"] = v.detail;
  return n;
}

YAML::Node admissibility_node(const AdmissibilityReport& r) {
  YAML::Node n;
  n["pass"] = r.pass();
  n["kappa"] = real(r.kappa);
  n["weights"] = verdict_node(r.weights);
  n["s_condition"] = verdict_node(r.s_condition);
  n["t_condition"] = verdict_node(r.t_condition);
  n["kappa_condition"] = verdict_node(r.kappa_condition);
  n["closed_forms"] = verdict_node(r.closed_forms);
  return n;
}

CommandResult withheld(CommandResult result, YAML::Node doc, const AdmissibilityReport& r) {
  doc["admissibility"] = admissibility_node(r);
  doc["result"] = "withheld: family failed validation";
  doc["pass"] = false;
  result.documents.push_back({result.command + ".yaml", emit(doc)});
  result.pass = false;
  result.summary = result.command + ": withheld, family failed validation";
  return result;
}

}  // namespace

CommandResult cmd_validate(const ExperimentConfig& config) {
  config.check();
  const WeightFamily family = make_family(config.family);
  const AdmissibilityReport r = validate(family, config.trunc);
  CommandResult result{"validate", {}, r.pass(), ""};

  YAML::Node doc = header("validate", config, &family);
  doc["admissibility"] = admissibility_node(r);
  doc["pass"] = r.pass();
  result.documents.push_back({"validate.yaml", emit(doc)});

  Table table("validate", config);
  table.row({"n", "s", "s_converged", "t", "t_converged", "t_bound"});
  for (std::size_t n = 0; n < r.s.size(); ++n) {
    table.row({std::to_string(n), format_real(r.s[n].value()), flag(r.s[n].converged),
               format_real(r.t[n].value()), flag(r.t[n].converged),
               n < r.t_bound.size() ? format_real(r.t_bound[n]) : ""});
  }
  result.documents.push_back({"validate.csv", table.str()});
  result.summary = fmt::format("validate: {} (kappa = {})", r.pass() ? "pass" : "fail",
                               format_real(r.kappa));
  return result;
}

CommandResult cmd_verify(const ExperimentConfig& config) {
  config.check();
  const WeightFamily family = make_family(config.family);
  const AdmissibilityReport adm = validate(family, config.trunc);
  CommandResult result{"verify", {}, false, ""};
  YAML::Node doc = header("verify", config, &family);
  if (!adm.pass()) return withheld(result, doc, adm);

  const GluedDirac op(family, config.trunc);
  const ParametrixSet pset(family, config.trunc);
  const IdentityReport r = verify_identities(pset, op, config.samples, config.seed);
  const GluedElement x = pset.apply_Q(random_admissible_rhs(config.trunc, config.seed, 0));
  const DomainReport dom = in_domain(op, x);

  YAML::Node id;
  id["samples"] = r.samples;
  id["precision_bits"] = r.precision_bits;
  id["dq_max_residual"] = real(r.dq_max_residual);
  id["dq_tolerance"] = real(r.tol_dq);
  id["dq_pass"] = r.dq_pass;
  id["qd_max_residual"] = real(r.qd_max_residual);
  id["qd_tolerance"] = real(r.tol_qd);
  id["qd_pass"] = r.qd_pass;
  id["max_leakage"] = real(r.max_leakage);
  id["dq_double_residual"] = real(r.dq_double_residual);
  doc["identities"] = id;
  YAML::Node glue;
  glue["in_domain"] = dom.in_domain;
  glue["max_residual"] = real(dom.gluing.max_residual);
  glue["reason"] = dom.reason;
  doc["q_output_domain"] = glue;
  result.pass = r.pass() && dom.in_domain;
  doc["pass"] = result.pass;
  result.documents.push_back({"verify.yaml", emit(doc)});
  result.summary = fmt::format("verify: {} (DQ {}, QD {})", result.pass ? "pass" : "fail",
                               format_real(r.dq_max_residual), format_real(r.qd_max_residual));
  return result;
}

CommandResult cmd_hs(const ExperimentConfig& config) {
  config.check();
  ExperimentConfig effective = config;
  effective.trunc.n_max = std::max(config.trunc.n_max, config.hs_to + 1);
  const WeightFamily family = make_family(effective.family);
  const AdmissibilityReport adm = validate(family, effective.trunc);
  CommandResult result{"hs", {}, false, ""};
  YAML::Node doc = header("hs", effective, &family);
  if (!adm.pass()) return withheld(result, doc, adm);

  const ParametrixSet pset(family, effective.trunc);
  const DecayTable decay = compactness_report(pset, adm, effective.hs_from, effective.hs_to);
  bool t3_nonincreasing = true;
  for (std::size_t i = 1; i < decay.rows.size(); ++i) {
    t3_nonincreasing = t3_nonincreasing && decay.rows[i].hs[2] <= decay.rows[i - 1].hs[2];
  }
  Table quantum("hs", effective);
  quantum.row({"n", "hs_T1", "bound_T1", "sv_T1", "hs_T2", "bound_T2", "sv_T2", "hs_T3",
               "bound_T3", "sv_T3", "pass"});
  bool rows_pass = true;
  for (const auto& row : decay.rows) {
    std::vector<std::string> cells{std::to_string(row.n)};
    for (int c = 0; c < 3; ++c) {
      cells.push_back(format_real(row.hs[c]));
      cells.push_back(format_real(row.bound[c]));
      cells.push_back(format_real(row.top_singular[c]));
    }
    cells.push_back(flag(row.pass));
    quantum.row(cells);
    rows_pass = rows_pass && row.pass;
  }

  const RadialGrid grid = make_radial_grid(effective.grid);
  const auto classical = classical_hs_norms(effective.classical_from, effective.classical_to, grid);
  Table ctable("hs", effective);
  ctable.row({"kind", "n", "hs_squared", "bound_squared", "pass"});
  bool classical_pass = true;
  for (const auto& row : classical) {
    ctable.row({row.kind, std::to_string(row.n), format_real(row.hs_sq), format_real(row.bound_sq),
                flag(row.pass)});
    classical_pass = classical_pass && row.pass;
  }

  YAML::Node q;
  q["kappa"] = real(adm.kappa);
  q["verdict"] = to_string(decay.verdict);
  q["reason"] = decay.reason;
  q["rows_pass"] = rows_pass;
  q["t3_nonincreasing"] = t3_nonincreasing;
  q["t3_step2_median"] = real(decay.t3_step2_median);
  q["t3_step2_max"] = real(decay.t3_step2_max);
  doc["quantum"] = q;
  YAML::Node c;
  c["grid"] = static_cast<long long>(grid.size());
  c["rows_pass"] = classical_pass;
  doc["classical"] = c;
  result.pass = decay.verdict == Verdict::kSupported && rows_pass && t3_nonincreasing &&
                classical_pass;
  doc["pass"] = result.pass;
  result.documents.push_back({"hs.yaml", emit(doc)});
  result.documents.push_back({"hs_quantum.csv", quantum.str()});
  result.documents.push_back({"hs_classical.csv", ctable.str()});
  result.summary = fmt::format("hs: {} (quantum {}, classical rows {})",
                               result.pass ? "pass" : "fail", to_string(decay.verdict),
                               classical_pass ? "within bounds" : "breach");
  return result;
}

CommandResult cmd_kernel(const ExperimentConfig& config) {
  config.check();
  const WeightFamily family = make_family(config.family);
  const AdmissibilityReport adm = validate(family, config.trunc);
  CommandResult result{"kernel", {}, false, ""};
  YAML::Node doc = header("kernel", config, &family);
  if (!adm.pass()) return withheld(result, doc, adm);

  const GluedDirac op(family, config.trunc);
  const auto basis = kernel_D(op);
  const KernelCertificate cert = certify_kernel(op);
  YAML::Node q;
  q["dimension"] = basis.size();
  q["certified_nullity"] = static_cast<long long>(cert.total_nullity());
  YAML::Node modes;
  for (const auto& m : cert.modes) {
    YAML::Node e;
    e["n"] = m.n;
    e["rank"] = static_cast<long long>(m.rank);
    e["unknowns"] = static_cast<long long>(m.unknowns);
    e["nullity"] = static_cast<long long>(m.nullity);
    modes.push_back(e);
  }
  q["modes"] = modes;
  q["basis_residual"] = real(cert.basis_residual);
  const bool quantum_pass = basis.size() == 1 && cert.total_nullity() == 1 &&
                            cert.modes.front().nullity == 1 && cert.basis_residual <= 1e-10;
  q["pass"] = quantum_pass;
  doc["quantum"] = q;

  const RadialGrid grid = make_radial_grid(config.grid);
  const ClassicalKernelReport ck = classical_kernel_check(grid, config.classical_modes);
  YAML::Node c;
  c["dimension"] = ck.dimension;
  YAML::Node cands;
  for (const auto& k : ck.candidates) {
    YAML::Node e;
    e["n"] = k.n;
    e["candidate"] = k.description;
    e["dbar_residual"] = real(k.dbar_residual);
    e["growth_ratio"] = real(k.growth_ratio);
    e["regular"] = k.regular;
    e["boundary_residual"] = real(k.boundary_residual);
    e["accepted"] = k.accepted;
    cands.push_back(e);
  }
  c["candidates"] = cands;
  const bool classical_pass = ck.dimension == 1 && ck.candidates.front().accepted;
  c["pass"] = classical_pass;
  doc["classical"] = c;
  result.pass = quantum_pass && classical_pass;
  doc["pass"] = result.pass;
  result.documents.push_back({"kernel.yaml", emit(doc)});

  Table profile("kernel", config);
  profile.row({"k", "profile"});
  const Vector& p = basis.front().f.plus(0);
  for (Index k = 0; k < p.size(); ++k) profile.row({std::to_string(k), format_real(p[k])});
  result.documents.push_back({"kernel_profile.csv", profile.str()});
  result.summary = fmt::format("kernel: {} (quantum dimension {}, classical dimension {})",
                               result.pass ? "pass" : "fail", basis.size(), ck.dimension);
  return result;
}

CommandResult cmd_classical(const ExperimentConfig& config) {
  config.check();
  constexpr double kResidualTol = 1e-6;
  constexpr double kBoundaryTol = 1e-8;
  CommandResult result{"classical", {}, false, ""};
  YAML::Node doc = header("classical", config, nullptr);

  const RadialGrid grid = make_radial_grid(config.grid);
  const ClassicalElement rhs = random_smooth_rhs(grid, config.classical_modes, config.seed);
  const auto main = classical_parametrix_check(grid, rhs, Derivative::kSpectral);

  Table study("classical", config);
  study.row({"nodes", "spectral_residual", "fd_residual", "boundary_residual"});
  double prev_fd = 0.0;
  bool halving = true;
  for (Index nodes = 64; nodes <= config.grid; nodes *= 2) {
    const RadialGrid g = make_radial_grid(nodes);
    const ClassicalElement r = random_smooth_rhs(g, config.classical_modes, config.seed);
    const auto s = classical_parametrix_check(g, r, Derivative::kSpectral);
    const auto f = classical_parametrix_check(g, r, Derivative::kFiniteDifference);
    if (nodes > 64 && !(f.dbar_residual <= 0.5 * prev_fd || f.dbar_residual <= 1e-10)) {
      halving = false;
    }
    prev_fd = f.dbar_residual;
    study.row({std::to_string(nodes), format_real(s.dbar_residual), format_real(f.dbar_residual),
               format_real(s.boundary_residual)});
  }

  YAML::Node c;
  c["grid"] = static_cast<long long>(grid.size());
  c["modes"] = config.classical_modes;
  c["dbar_residual"] = real(main.dbar_residual);
  c["dbar_tolerance"] = real(kResidualTol);
  c["boundary_residual"] = real(main.boundary_residual);
  c["boundary_tolerance"] = real(kBoundaryTol);
  c["fd_halving_order"] = halving;
  doc["parametrix"] = c;
  result.pass = main.dbar_residual <= kResidualTol && main.boundary_residual <= kBoundaryTol &&
                halving;
  doc["pass"] = result.pass;
  result.documents.push_back({"classical.yaml", emit(doc)});
  result.documents.push_back({"classical_refinement.csv", study.str()});
  result.summary = fmt::format("classical: {} (residual {}, boundary {})",
                               result.pass ? "pass" : "fail", format_real(main.dbar_residual),
                               format_real(main.boundary_residual));
  return result;
}

CommandResult cmd_report_all(const ExperimentConfig& config) {
  CommandResult all{"report-all", {}, true, ""};
  YAML::Node doc = header("report-all", config, nullptr);
  for (auto* run : {&cmd_validate, &cmd_verify, &cmd_hs, &cmd_kernel, &cmd_classical}) {
    CommandResult r = (*run)(config);
    doc["results"][r.command] = r.pass;
    all.pass = all.pass && r.pass;
    all.summary += r.summary + "\n";
    for (auto& d : r.documents) all.documents.push_back(std::move(d));
  }
  doc["pass"] = all.pass;
  all.documents.push_back({"summary.yaml", emit(doc)});
  all.summary += fmt::format("report-all: {}", all.pass ? "pass" : "fail");
  return all;
}

void write_documents(const CommandResult& result, const std::string& directory) {
  std::filesystem::create_directories(directory);
  for (const auto& d : result.documents) {
    std::ofstream out(std::filesystem::path(directory) / d.name, std::ios::binary);
    out << d.content;
    if (!out) throw std::runtime_error("cannot write " + d.name);
  }
}

}  // namespace qdirac
