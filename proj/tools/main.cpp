// agler: command line front end. Exit status 0 on success, 1 on input
// errors, 2 when no certificate is found or a screen rejects the input,
// 3 on numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "io.hpp"

namespace {

using agler::io::json;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kNotFound = 2;
constexpr int kNumerical = 3;

struct Common {
  std::string domain;
  std::string domain_file;
  int degree = -1;
  int d_min = -1;
  int d_max = 4;
  double tol = 1e-8;
  int samples = -1;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* app, Common& c, int default_samples) {
  c.samples = default_samples;
  app->add_option("--domain", c.domain, "Preset: polydisk:d, cartan1:LxM, cartan2:m, cartan3:m");
  app->add_option("--domain-file", c.domain_file, "Domain JSON {\"d\", \"blocks\"}")->check(CLI::ExistingFile);
  app->add_option("--degree", c.degree, "Fix the witness degree (sets Dmin = Dmax)");
  app->add_option("--Dmin", c.d_min, "Smallest witness degree (default: smallest admissible)");
  app->add_option("--Dmax", c.d_max, "Largest witness degree")->capture_default_str();
  app->add_option("--tol", c.tol, "Certificate residual tolerance")->capture_default_str();
  app->add_option("--samples", c.samples, "Verification samples")->capture_default_str();
  app->add_option("--seed", c.seed, "Sampling seed")->capture_default_str();
  app->add_option("--out", c.out, "Write the JSON report here instead of stdout");
}

struct Context {
  agler::DomainSpec domain;
  std::string bounds_source;
};

Context load_domain(const Common& c) {
  if (c.domain.empty() == c.domain_file.empty()) {
    throw std::invalid_argument("exactly one of --domain and --domain-file is required");
  }
  Context ctx;
  if (!c.domain.empty()) {
    ctx.domain = agler::make_preset(c.domain);
    ctx.bounds_source = "preset";
    return ctx;
  }
  ctx.domain = agler::io::domain_from_json(agler::io::read_json_file(c.domain_file), c.domain_file);
  if (ctx.domain.bounds) {
    ctx.bounds_source = "file";
  } else {
    ctx.domain = agler::with_archimedean_bounds(ctx.domain, std::max(2, ctx.domain.max_block_degree()), 10.0);
    ctx.bounds_source = "archimedean";
  }
  return ctx;
}

agler::CertifyOptions certify_options(const Common& c) {
  agler::CertifyOptions o;
  o.d_min = c.degree >= 0 ? c.degree : c.d_min;
  o.d_max = c.degree >= 0 ? c.degree : c.d_max;
  o.tol = c.tol;
  o.seed = c.seed;
  if (o.d_max < 0) throw std::invalid_argument("--Dmax must be nonnegative");
  if (!(o.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  return o;
}

json domain_json(const Context& ctx) {
  return {{"name", ctx.domain.name},
          {"d", ctx.domain.d},
          {"blocks", ctx.domain.blocks.size()},
          {"bounds_source", ctx.bounds_source},
          {"approximation_hypothesis", ctx.domain.approximation_hypothesis_checked ? "checked" : "unchecked"}};
}

json parameters_json(const Common& c, const agler::CertifyOptions& o) {
  return {{"Dmin", o.d_min >= 0 ? json(o.d_min) : json("auto")},
          {"Dmax", o.d_max},
          {"tol", o.tol},
          {"solver_tol", o.tol * o.solver_tol_factor},
          {"rank_tol", o.rank_tol},
          {"solver_max_iter", o.solver.max_iter},
          {"screen_samples", o.screen_samples},
          {"samples", c.samples},
          {"seed", c.seed}};
}

json attempts_json(const agler::NotFoundUpToDegree& nf) {
  json a = json::array();
  for (const auto& at : nf.attempts) {
    a.push_back({{"degree", at.degree},
                 {"status", at.status},
                 {"detail", at.detail},
                 {"measure", at.measure},
                 {"iterations", at.iterations}});
  }
  return a;
}

void emit(const Common& c, const json& report) {
  if (c.out.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    agler::io::write_json_file(c.out, report);
  }
}

agler::MatPoly require_poly(const std::string& file, const char* flag) {
  if (file.empty()) throw std::invalid_argument(std::string(flag) + " is required");
  return agler::io::parse_poly(file);
}

int run_certify(const Common& c, const std::string& target_file, int spot_trials) {
  if (target_file.empty()) throw std::invalid_argument("--target is required");
  const Context ctx = load_domain(c);
  const agler::HermPoly target = agler::io::hermpoly_from_json(agler::io::read_json_file(target_file), target_file);
  agler::CertifyOptions o = certify_options(c);
  json report = {{"command", "certify"}, {"domain", domain_json(ctx)}, {"parameters", parameters_json(c, o)}};
  report["parameters"]["spot_trials"] = spot_trials;
  const agler::CertifyResult res = agler::certify(target, ctx.domain, o);
  if (const auto* nf = std::get_if<agler::NotFoundUpToDegree>(&res)) {
    report["status"] = "not-found";
    report["reason"] = nf->reason;
    report["highest_degree"] = nf->highest_degree;
    report["attempts"] = attempts_json(*nf);
    if (nf->witness) {
      report["witness"] = agler::io::to_json(*nf->witness);
      report["witness_eigenvalue"] = nf->witness_eigenvalue;
    }
    emit(c, report);
    return kNotFound;
  }
  const auto& cert = std::get<agler::Certificate>(res);
  const auto spot = agler::hereditary_spot_check(target, cert, ctx.domain, spot_trials, 3, c.seed, 1e-8);
  report["status"] = "certified";
  report["certificate"] = agler::io::to_json(cert);
  report["spot_check"] = {{"trials", spot.trials},
                          {"max_mismatch", spot.max_mismatch},
                          {"min_target_eigenvalue", spot.trials ? spot.min_target_eigenvalue : 0.0},
                          {"failures", spot.failures}};
  emit(c, report);
  return kOk;
}

int run_realize(const Common& c, const std::string& qf, const std::string& rf) {
  const Context ctx = load_domain(c);
  const agler::RationalMatFn fn{require_poly(qf, "--Q"), require_poly(rf, "--R")};
  agler::RealizeOptions o;
  o.certify = certify_options(c);
  json report = {{"command", "realize"}, {"domain", domain_json(ctx)}, {"parameters", parameters_json(c, o.certify)}};
  report["parameters"]["sup_screen_samples"] = o.screen_samples;
  report["parameters"]["sup_screen_margin"] = o.screen_margin;
  try {
    const agler::Colligation col = agler::realize(fn, ctx.domain, o);
    const auto ver = agler::verify_realization(col, fn, ctx.domain, c.samples, c.seed);
    report["status"] = "realized";
    report["colligation"] = agler::io::to_json(col);
    report["verification"] = {{"samples", ver.samples}, {"max_error", ver.max_error}, {"sigma_max", ver.sigma_max}};
  } catch (const agler::ScreenFailure& e) {
    report["status"] = "screen-failure";
    report["reason"] = e.what();
    report["witness"] = agler::io::to_json(e.point);
    emit(c, report);
    return kNotFound;
  } catch (const agler::NotFoundError& e) {
    report["status"] = "degree-exhausted";
    report["reason"] = e.what();
    emit(c, report);
    return kNotFound;
  }
  emit(c, report);
  return kOk;
}

int run_detrep(const Common& c, const std::string& pf, double c_tol) {
  const Context ctx = load_domain(c);
  const agler::MatPoly p = require_poly(pf, "--p");
  agler::DetRepOptions o;
  o.certify = certify_options(c);
  o.c_tol = c_tol;
  o.verify_samples = c.samples;
  json report = {{"command", "detrep"}, {"domain", domain_json(ctx)}, {"parameters", parameters_json(c, o.certify)}};
  report["parameters"]["c_tol"] = o.c_tol;
  report["parameters"]["stability_screen_samples"] = o.screen_samples;
  report["parameters"]["stability_screen_margin"] = o.screen_margin;
  report["parameters"]["remainder_tol"] = o.remainder_tol;
  try {
    const agler::DetRep rep = agler::extract_detrep(p, ctx.domain, o);
    const auto scan = agler::stability_scan(rep.q, ctx.domain, c.samples, c.seed);
    report["status"] = "represented";
    report["detrep"] = agler::io::to_json(rep);
    json margins = json::array();
    for (const auto& [m, v] : scan.min_by_margin) margins.push_back({{"margin", m}, {"min_modulus", v}});
    report["stability_scan"] = {{"min_modulus", scan.min_modulus}, {"flagged", scan.flagged}, {"margins", margins}};
  } catch (const agler::ScreenFailure& e) {
    report["status"] = "screen-failure";
    report["reason"] = e.what();
    report["witness"] = agler::io::to_json(e.point);
    emit(c, report);
    return kNotFound;
  } catch (const agler::NotFoundError& e) {
    report["status"] = "degree-exhausted";
    report["reason"] = e.what();
    emit(c, report);
    return kNotFound;
  }
  emit(c, report);
  return kOk;
}

int run_eval(const Common& c, const std::string& point, const std::string& poly, const std::string& colf) {
  if (point.empty()) throw std::invalid_argument("--point is required");
  const agler::Point z = agler::io::parse_point(point);
  json report = {{"command", "eval"}, {"point", agler::io::to_json(z)}};
  if (!poly.empty() == !colf.empty()) throw std::invalid_argument("exactly one of --poly and --colligation is required");
  if (!poly.empty()) {
    report["value"] = agler::io::to_json(agler::eval_matpoly(agler::io::parse_poly(poly), z));
  } else {
    const Context ctx = load_domain(c);
    const auto col = agler::io::colligation_from_json(agler::io::read_json_file(colf), colf);
    const double norm = agler::p_norm_at(ctx.domain, z);
    report["domain"] = domain_json(ctx);
    report["p_norm"] = norm;
    if (norm >= 1.0) throw std::invalid_argument("point lies outside the domain (||P(z)|| = " + std::to_string(norm) + ")");
    report["value"] = agler::io::to_json(agler::eval_realization(col, ctx.domain, z));
  }
  emit(c, report);
  return kOk;
}

int run_verify(const Common& c, const std::string& colf, const std::string& certf, const std::string& repf,
               const std::string& qf, const std::string& rf, const std::string& target_file, const std::string& pf) {
  const Context ctx = load_domain(c);
  json report = {{"command", "verify"}, {"domain", domain_json(ctx)}, {"parameters", {{"tol", c.tol}, {"samples", c.samples}, {"seed", c.seed}}}};
  bool ok = false;
  const int chosen = int(!colf.empty()) + int(!certf.empty()) + int(!repf.empty());
  if (chosen != 1) throw std::invalid_argument("exactly one of --colligation, --certificate and --detrep is required");
  if (!colf.empty()) {
    const auto col = agler::io::colligation_from_json(agler::io::read_json_file(colf), colf);
    const agler::RationalMatFn fn{require_poly(qf, "--Q"), require_poly(rf, "--R")};
    const auto ver = agler::verify_realization(col, fn, ctx.domain, c.samples, c.seed);
    report["kind"] = "colligation";
    report["max_error"] = ver.max_error;
    report["sigma_max"] = ver.sigma_max;
    report["thresholds"] = {{"max_error", 1e-6}, {"sigma_max", 1.0 + 1e-10}};
    ok = ver.max_error <= 1e-6 && ver.sigma_max <= 1.0 + 1e-10;
  } else if (!certf.empty()) {
    if (target_file.empty()) throw std::invalid_argument("--target is required");
    const auto cert = agler::io::certificate_from_json(agler::io::read_json_file(certf), certf);
    const auto target = agler::io::hermpoly_from_json(agler::io::read_json_file(target_file), target_file);
    const double res = agler::certificate_residual(target, cert, ctx.domain);
    report["kind"] = "certificate";
    report["residual"] = res;
    report["thresholds"] = {{"residual", c.tol}};
    ok = res <= c.tol;
  } else {
    const auto rep = agler::io::detrep_from_json(agler::io::read_json_file(repf), repf);
    const agler::MatPoly p = require_poly(pf, "--p");
    const auto ver = agler::verify_detrep(rep, p, ctx.domain, c.samples, c.seed);
    report["kind"] = "detrep";
    report["max_residual"] = ver.max_residual;
    report["sigma_max"] = ver.sigma_max;
    report["thresholds"] = {{"max_residual", 1e-6}, {"sigma_max", 1.0 + 1e-10}};
    ok = ver.max_residual <= 1e-6 && ver.sigma_max <= 1.0 + 1e-10;
  }
  report["status"] = ok ? "pass" : "fail";
  emit(c, report);
  return ok ? kOk : kNotFound;
}

int run_archimedean(const Common& c, double r_max) {
  Common cc = c;
  Context ctx;
  if (c.domain.empty() == c.domain_file.empty()) {
    throw std::invalid_argument("exactly one of --domain and --domain-file is required");
  }
  if (!c.domain.empty()) {
    ctx.domain = agler::make_preset(c.domain);
    ctx.bounds_source = "preset";
  } else {
    ctx.domain = agler::io::domain_from_json(agler::io::read_json_file(c.domain_file), c.domain_file);
    ctx.bounds_source = ctx.domain.bounds ? "file" : "none";
  }
  const int max_degree = c.degree >= 0 ? c.degree : std::max(2, ctx.domain.max_block_degree());
  agler::CertifyOptions o;
  o.tol = c.tol;
  const auto rep = agler::archimedean_check(ctx.domain, max_degree, r_max, 1e-3, o);
  json vars = json::array();
  for (std::size_t i = 0; i < rep.radius.size(); ++i) {
    json v = {{"variable", i + 1}, {"radius", rep.radius[i]}, {"feasible_degree", rep.feasible_degree[i]}};
    if (rep.certificates[i]) v["certificate"] = agler::io::to_json(*rep.certificates[i]);
    vars.push_back(std::move(v));
  }
  json report = {{"command", "archimedean"},
                 {"domain", domain_json(ctx)},
                 {"parameters", {{"max_degree", max_degree}, {"r_max", r_max}, {"radius_tol", 1e-3}, {"tol", o.tol},
                                 {"solver_tol", o.tol * o.solver_tol_factor}}},
                 {"status", rep.all_found() ? "archimedean" : "not-found"},
                 {"variables", std::move(vars)}};
  emit(cc, report);
  return rep.all_found() ? kOk : kNotFound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agler: sum-of-squares certificates, contractive realizations and determinantal representations"};
  app.require_subcommand(1);

  Common cert_c, real_c, det_c, eval_c, ver_c, arch_c;
  std::string target, qf, rf, pf, point, poly, colf, certf, repf;
  int spot_trials = 20;
  double c_tol = 1e-3;
  double r_max = 2.0;

  auto* certify = app.add_subcommand("certify", "Certify membership of a Hermitian polynomial in the quadratic module");
  add_common(certify, cert_c, 0);
  certify->add_option("--target", target, "Target Hermitian polynomial JSON")->check(CLI::ExistingFile);
  certify->add_option("--spot-trials", spot_trials, "Hereditary spot-check trials")->capture_default_str();

  auto* realize = app.add_subcommand("realize", "Contractive colligation realizing Q R^-1");
  add_common(realize, real_c, 100);
  realize->add_option("--Q", qf, "Numerator polynomial JSON")->check(CLI::ExistingFile);
  realize->add_option("--R", rf, "Denominator polynomial JSON")->check(CLI::ExistingFile);

  auto* detrep = app.add_subcommand("detrep", "Contractive determinantal representation of a stable polynomial");
  add_common(detrep, det_c, 200);
  detrep->add_option("--p", pf, "Scalar polynomial JSON")->check(CLI::ExistingFile);
  detrep->add_option("--c-tol", c_tol, "Scale bisection tolerance")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Evaluate a polynomial or a colligation at a point");
  add_common(eval, eval_c, 0);
  eval->add_option("--point", point, "Coordinates \"re,im;re,im;...\"");
  eval->add_option("--poly", poly, "Polynomial JSON")->check(CLI::ExistingFile);
  eval->add_option("--colligation", colf, "Colligation JSON")->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify", "Re-verify a stored colligation, certificate or determinantal representation");
  add_common(verify, ver_c, 100);
  verify->add_option("--colligation", colf, "Colligation JSON (with --Q, --R)")->check(CLI::ExistingFile);
  verify->add_option("--certificate", certf, "Certificate JSON (with --target)")->check(CLI::ExistingFile);
  verify->add_option("--detrep", repf, "Determinantal representation JSON (with --p)")->check(CLI::ExistingFile);
  verify->add_option("--Q", qf, "Numerator polynomial JSON")->check(CLI::ExistingFile);
  verify->add_option("--R", rf, "Denominator polynomial JSON")->check(CLI::ExistingFile);
  verify->add_option("--target", target, "Target Hermitian polynomial JSON")->check(CLI::ExistingFile);
  verify->add_option("--p", pf, "Scalar polynomial JSON")->check(CLI::ExistingFile);

  auto* arch = app.add_subcommand("archimedean", "Radii r_i with r_i^2 - w_i z_i in the quadratic module");
  add_common(arch, arch_c, 0);
  arch->add_option("--rmax", r_max, "Upper end of the radius bisection")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (certify->parsed()) return run_certify(cert_c, target, spot_trials);
    if (realize->parsed()) return run_realize(real_c, qf, rf);
    if (detrep->parsed()) return run_detrep(det_c, pf, c_tol);
    if (eval->parsed()) return run_eval(eval_c, point, poly, colf);
    if (verify->parsed()) return run_verify(ver_c, colf, certf, repf, qf, rf, target, pf);
    if (arch->parsed()) return run_archimedean(arch_c, r_max);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const agler::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kInputError;
}
