#include "qistate/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "qistate/cocycle.hpp"
#include "qistate/commutative.hpp"
#include "qistate/expectation.hpp"
#include "qistate/invariant.hpp"
#include "qistate/random.hpp"
#include "qistate/standard_impl.hpp"
#include "qistate/trace.hpp"

#ifndef QISTATE_VERSION
#define QISTATE_VERSION "0.0.0"
#endif

namespace qistate::cli {

std::string tool_version() { return QISTATE_VERSION; }

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

const json& require_field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) field_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) field_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(path, "non-finite number");
  return v;
}

CMatrix matrix_from_json(const json& j, int n, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) field_error(path, "expected " + std::to_string(n) + " rows");
  CMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n)
      field_error(rp, "expected " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      const std::string cp = rp + "[" + std::to_string(c) + "]";
      const json& z = j[r][c];
      if (z.is_number()) {
        m(r, c) = cplx(number_at(z, cp), 0.0);
      } else if (z.is_array() && z.size() == 2) {
        m(r, c) = cplx(number_at(z[0], cp + "[0]"), number_at(z[1], cp + "[1]"));
      } else {
        field_error(cp, "expected [re, im]");
      }
    }
  }
  return m;
}

std::vector<CMatrix> blocks_from_json(const json& j, const AlgebraDescriptor& desc, const std::string& path) {
  if (!j.is_array() || j.size() != desc.block_count())
    field_error(path, "expected " + std::to_string(desc.block_count()) + " blocks");
  std::vector<CMatrix> blocks;
  for (std::size_t i = 0; i < desc.block_count(); ++i)
    blocks.push_back(matrix_from_json(j[i], desc.dim(i), path + "[" + std::to_string(i) + "]"));
  return blocks;
}

double positive_number(const json& j, const std::string& path) {
  const double v = number_at(j, path);
  if (!(v > 0.0)) field_error(path, "must be positive");
  return v;
}

}  // namespace

AlgebraElement element_from_json(const json& j, const AlgebraDescriptor& desc, const std::string& path) {
  return AlgebraElement(desc, blocks_from_json(j, desc, path));
}

json element_to_json(const AlgebraElement& a) {
  json out = json::array();
  for (const CMatrix& b : a.blocks()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < b.cols(); ++c) row.push_back({b(r, c).real(), b(r, c).imag()});
      rows.push_back(std::move(row));
    }
    out.push_back(std::move(rows));
  }
  return out;
}

Instance parse_instance(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("instance: JSON parse error: ") + e.what());
  }
  if (!root.is_object()) field_error("instance", "expected a JSON object");

  const json& dims_j = require_field(require_field(root, "algebra", ""), "block_dims", "algebra");
  if (!dims_j.is_array() || dims_j.empty()) field_error("algebra.block_dims", "expected a non-empty array");
  std::vector<int> dims;
  for (std::size_t i = 0; i < dims_j.size(); ++i) {
    if (!dims_j[i].is_number_integer() || dims_j[i].get<long>() < 1)
      field_error("algebra.block_dims[" + std::to_string(i) + "]", "expected a positive integer");
    dims.push_back(dims_j[i].get<int>());
  }
  AlgebraDescriptor desc(dims);

  Tolerances tol;
  if (auto it = root.find("tolerances"); it != root.end()) {
    if (!it->is_object()) field_error("tolerances", "expected an object");
    if (it->contains("tol_eq")) tol.eq = positive_number((*it)["tol_eq"], "tolerances.tol_eq");
    if (it->contains("tol_pos")) tol.pos = positive_number((*it)["tol_pos"], "tolerances.tol_pos");
    if (it->contains("tol_herm")) tol.herm = positive_number((*it)["tol_herm"], "tolerances.tol_herm");
  }

  std::size_t cap = default_closure_cap;
  if (auto it = root.find("closure_cap"); it != root.end()) {
    if (!it->is_number_integer() || it->get<long>() < 1) field_error("closure_cap", "expected a positive integer");
    cap = it->get<std::size_t>();
  }

  const json& dens = require_field(require_field(root, "state", ""), "density", "state");
  AlgebraElement rho = element_from_json(dens, desc, "state.density");
  State phi = State::from_density(std::move(rho), tol);

  std::vector<Automorphism> gens;
  if (auto it = root.find("generators"); it != root.end()) {
    if (!it->is_array()) field_error("generators", "expected an array");
    for (std::size_t g = 0; g < it->size(); ++g) {
      const std::string path = "generators[" + std::to_string(g) + "]";
      const json& gj = (*it)[g];
      const json& perm_j = require_field(gj, "perm", path);
      if (!perm_j.is_array()) field_error(path + ".perm", "expected an array");
      std::vector<int> perm;
      for (std::size_t i = 0; i < perm_j.size(); ++i) {
        if (!perm_j[i].is_number_integer())
          field_error(path + ".perm[" + std::to_string(i) + "]", "expected an integer");
        perm.push_back(perm_j[i].get<int>());
      }
      const auto units = blocks_from_json(require_field(gj, "unitaries", path), desc, path + ".unitaries");
      try {
        gens.emplace_back(desc, std::move(perm), units);
      } catch (const InputError& e) {
        field_error(path, e.what());
      }
    }
  }
  return Instance{std::move(desc), std::move(phi), std::move(gens), tol, cap, sha256_hex(text)};
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("input: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

json Report::to_json(bool with_timestamp) const {
  json out;
  out["tool"] = {{"name", "qistate"}, {"version", tool_version()}};
  out["command"] = command;
  out["input_digest"] = "sha256:" + digest;
  out["pass"] = pass();
  json list = json::array();
  for (const auto& c : checks)
    list.push_back({{"name", c.name},
                    {"paper_anchor", c.anchor},
                    {"residual", c.residual},
                    {"threshold", c.threshold},
                    {"pass", c.pass},
                    {"asserted", c.asserted}});
  out["checks"] = std::move(list);
  out["summary"] = summary;
  out["artifacts"] = artifacts;
  if (with_timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    out["timestamp"] = ts.str();
  }
  return out;
}

namespace {

constexpr std::size_t kProbeCount = 24;

// Shared pipeline state for the instance commands.
struct Context {
  const Instance& inst;
  Tolerances tol;
  FiniteGroup group;
  CocycleTable table;
  StrongQiReport strong;
  std::vector<AlgebraElement> psd;
  std::vector<AlgebraElement> generic;
};

Context make_context(const Instance& inst, const Options& opt) {
  Tolerances tol = inst.tol;
  if (opt.tol_eq) tol.eq = *opt.tol_eq;
  if (opt.tol_pos) tol.pos = *opt.tol_pos;
  require_faithful(inst.phi, tol, "instance");
  std::vector<Automorphism> gens = inst.generators;
  if (gens.empty()) gens.push_back(Automorphism::identity(inst.descriptor));
  FiniteGroup group = close_group(gens, opt.closure_cap.value_or(inst.closure_cap));
  CocycleTable table = build_table(inst.phi, group, tol);
  StrongQiReport strong = is_strongly_qi(inst.phi, table, tol);
  Rng rng(opt.seed);
  std::vector<AlgebraElement> psd = psd_probes(inst.descriptor, rng, kProbeCount);
  std::vector<AlgebraElement> generic;
  for (std::size_t i = 0; i < 6; ++i) generic.push_back(random_element(inst.descriptor, rng));
  return Context{inst, tol, std::move(group), std::move(table), std::move(strong), std::move(psd), std::move(generic)};
}

Report base_report(const std::string& command, const Context& ctx) {
  Report r;
  r.command = command;
  r.digest = ctx.inst.digest;
  r.summary["lambda"] = ctx.table.lambda_bound;
  r.summary["group_order"] = ctx.group.size();
  r.summary["strong_qi"] = ctx.strong.strong;
  r.summary["block_dims"] = ctx.inst.descriptor.block_dims();
  r.summary["tolerances"] = {{"tol_eq", ctx.tol.eq}, {"tol_pos", ctx.tol.pos}, {"tol_herm", ctx.tol.herm}};
  r.summary["fixed_algebra_dim"] = fixed_algebra(ctx.group, ctx.tol).dimension();
  const bool ergodic = is_center_ergodic(ctx.group);
  r.summary["center_ergodic"] = ergodic;
  r.summary["trace_weights"] = ergodic ? json(invariant_trace(ctx.group, ctx.tol).tau.weights) : json(nullptr);
  return r;
}

// Folds per-element check lists into one entry per name, keeping the worst residual.
void merge_worst(CheckList& into, const CheckList& more) {
  for (const auto& c : more) {
    auto it = std::find_if(into.begin(), into.end(), [&](const CheckResult& x) { return x.name == c.name; });
    if (it == into.end()) {
      into.push_back(c);
    } else if (!(c.residual <= it->residual) || !c.pass) {
      *it = c;
    }
  }
}

}  // namespace

Report cmd_check(const Instance& inst, const Options& opt) {
  const Context ctx = make_context(inst, opt);
  Report r = base_report("check", ctx);
  r.checks = {
      verify_cocycle_identity(ctx.table, ctx.tol),
      verify_inverse_formula(ctx.table, ctx.tol),
      verify_adjoint_relation(inst.phi, ctx.table, ctx.tol),
      sandwich_check(inst.phi, ctx.table, ctx.psd, ctx.tol),
  };
  append(r.checks, ctx.strong.checks);

  // Elements a with phi(a .) positive: x_g and x_g^-1 (phi(x_g .) = phi o g),
  // and rho^-1 p for positive p.
  const AlgebraElement rho_inv = inst.phi.density().inverse(ctx.tol.pos);
  CheckList sz;
  for (std::size_t k = 0; k < 4 && k < ctx.psd.size(); ++k)
    merge_worst(sz, {sz_domination(inst.phi, rho_inv * ctx.psd[k], ctx.psd, ctx.tol)});
  for (std::size_t g = 0; g < ctx.group.size(); ++g) {
    merge_worst(sz, {sz_domination(inst.phi, ctx.table.x(g), ctx.psd, ctx.tol)});
    merge_worst(sz, {sz_domination(inst.phi, ctx.table.inverses[g], ctx.psd, ctx.tol)});
  }
  append(r.checks, sz);

  r.summary["cocycle_norms"] = json::array();
  for (std::size_t g = 0; g < ctx.group.size(); ++g)
    r.summary["cocycle_norms"].push_back({ctx.table.x(g).norm(), ctx.table.inverses[g].norm()});
  return r;
}

Report cmd_invariant(const Instance& inst, const Options& opt) {
  const Context ctx = make_context(inst, opt);
  Report r = base_report("invariant", ctx);
  r.checks = gamma_properties_check(inst.phi, ctx.table, ctx.generic, ctx.tol);
  const InvariantCertificate cert = invariant_state(inst.phi, ctx.table, ctx.psd, ctx.tol);
  append(r.checks, cert.checks);
  CheckList converse;
  for (const auto& g : ctx.group.elements()) merge_worst(converse, cocycle_from_d(inst.phi, cert.d, g, ctx.tol).checks);
  append(r.checks, converse);
  if (ctx.strong.strong) append(r.checks, strong_case_check(ctx.table, cert.d, ctx.tol));

  r.summary["d_min_singular_value"] = cert.d_min_singular_value;
  r.summary["d_norm"] = cert.d.norm();
  r.summary["residuals"] = cert.residuals;
  r.artifacts["d"] = element_to_json(cert.d);
  r.artifacts["rho_psi"] = element_to_json(cert.psi.density());
  return r;
}

Report cmd_implement(const Instance& inst, const Options& opt) {
  const Context ctx = make_context(inst, opt);
  Report r = base_report("implement", ctx);
  CheckList per_g;
  for (std::size_t g = 0; g < ctx.group.size(); ++g) {
    merge_worst(per_g, unitarity_checks(u_g(inst.phi, ctx.group.element(g), ctx.tol), ctx.tol));
    merge_worst(per_g, a_g_checks(inst.phi, ctx.table, g, ctx.strong.strong, ctx.tol));
  }
  r.checks = per_g;
  r.checks.push_back(verify_covariance(inst.phi, ctx.group, ctx.tol));
  r.checks.push_back(verify_representation(inst.phi, ctx.group, ctx.strong.strong, ctx.tol));
  const InvariantCertificate cert = invariant_state(inst.phi, ctx.table, ctx.psd, ctx.tol);
  const GammaFactorization gf = gamma_factorization(inst.phi, cert.psi, cert.d, ctx.table, ctx.tol);
  append(r.checks, gf.checks);
  r.artifacts["gamma"] = element_to_json(gf.gamma);
  return r;
}

Report cmd_expectation(const Instance& inst, const Options& opt) {
  const Context ctx = make_context(inst, opt);
  Report r = base_report("expectation", ctx);
  const FixedAlgebra fixed = fixed_algebra(ctx.group, ctx.tol);
  r.checks = fixed.checks;
  const InvariantCertificate cert = invariant_state(inst.phi, ctx.table, ctx.psd, ctx.tol);
  const ConditionalExpectation Phi = cond_expectation(cert.psi, ctx.group, ctx.tol);
  append(r.checks, verify_conditional_expectation(Phi, cert.psi, fixed, ctx.generic, ctx.psd, ctx.tol));
  const Projection e0 = e0_projection(inst.phi, ctx.group, ctx.tol);
  append(r.checks, e0.checks);
  r.summary["e0_rank"] = e0.rank();

  if (ctx.strong.strong) {
    append(r.checks, verify_ks(inst.phi, ctx.table, cert, ctx.tol));
  } else {
    r.summary["ks_skipped"] = "state is not strongly quasi-invariant";
  }
  try {
    const CommutantProjection f0 = commutant_f0(fixed, e0, ctx.strong.strong, default_commutant_cap, ctx.tol);
    append(r.checks, f0.f0.checks);
    r.summary["commutant_dim"] = f0.commutant_dimension;
    r.summary["f0_rank"] = f0.f0.rank();
  } catch (const PreconditionError& e) {
    r.summary["f0_skipped"] = e.what();
  }
  r.artifacts["fixed_basis"] = json::array();
  for (const auto& b : fixed.basis) r.artifacts["fixed_basis"].push_back(element_to_json(b));
  return r;
}

Report cmd_trace(const Instance& inst, const Options& opt) {
  const Context ctx = make_context(inst, opt);
  Report r = base_report("trace", ctx);
  const InvariantTrace it = invariant_trace(ctx.group, ctx.tol);
  r.summary["trace_solution_dimension"] = it.solution_dimension;
  r.checks = verify_trace_properties(it.tau, ctx.group, ctx.generic, ctx.tol);
  append(r.checks, verify_density_relations(inst.phi, ctx.table, it.tau, ctx.tol));
  r.artifacts["c"] = element_to_json(trace_density(inst.phi, it.tau, ctx.tol));
  return r;
}

Report cmd_counterexample(const Options& opt) {
  if (!(opt.grid_R > 0.0) || opt.grid_N < 2) throw InputError("grid: need --grid-R > 0 and --grid-N >= 2");
  Report r;
  r.command = "counterexample";
  std::ostringstream params;
  params << "grid_R=" << opt.grid_R << ";grid_N=" << opt.grid_N << ";seed=" << opt.seed;
  r.digest = sha256_hex(params.str());

  const std::vector<double> grid = symmetric_grid(opt.grid_R, opt.grid_N);
  QuadConfig quad;
  quad.R = opt.grid_R;
  const RealFunction bump = RealFunction::gaussian_bump(0.3, 1.5);

  Rng rng(opt.seed);
  std::uniform_real_distribution<double> shift(-5.0, 5.0), scale(0.25, 4.0);
  std::vector<std::pair<double, double>> shifts{{1.0, 2.0}};
  std::vector<std::pair<AxBElement, AxBElement>> pairs{{AxBElement(2, 1), AxBElement(3, 4)}};
  for (int i = 0; i < 3; ++i) {
    shifts.emplace_back(shift(rng), shift(rng));
    pairs.emplace_back(AxBElement(scale(rng), shift(rng)), AxBElement(scale(rng), shift(rng)));
  }
  for (const auto& [t1, t2] : shifts) merge_worst(r.checks, verify_translation_identities(t1, t2, grid, bump, quad));
  for (const auto& [e1, e2] : pairs) merge_worst(r.checks, verify_axb(e1, e2, grid, bump, quad));

  json witnesses = json::array();
  for (double t : {1.0, 3.0, 10.0}) {
    const WitnessReport w = unboundedness_witness(t, grid);
    for (auto c : w.checks) {
      c.name += "(t=" + std::to_string(static_cast<int>(t)) + ")";
      r.checks.push_back(c);
    }
    witnesses.push_back({{"t", t}, {"witness", w.witness}, {"grid_sup", w.grid_sup},
                         {"grid_sup_inverse", w.grid_sup_inv}, {"exact_sup", w.exact_sup}});
  }
  r.summary["witnesses"] = witnesses;

  json escape = json::array();
  const std::vector<double> horizons{2.0, 10.0, 100.0, 1000.0};
  for (const auto& row : mass_escape(horizons)) escape.push_back({{"T", row.T}, {"sup", row.sup}, {"mass", row.mass}});
  r.summary["mass_escape_illustration"] = escape;
  r.summary["grid"] = {{"R", opt.grid_R}, {"N", opt.grid_N}};
  return r;
}

}  // namespace qistate::cli
