#include <CLI11.hpp>

#include <iostream>

#include "coverforge/decompose.hpp"
#include "coverforge/euclid.hpp"
#include "coverforge/json_io.hpp"
#include "coverforge/refine.hpp"

using namespace coverforge;
using io::json;

namespace {

enum Exit { Pass = 0, Fail = 1, BadInput = 2 };

struct Shared {
  std::string window;
  std::string step = "1/16";
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

// "lo:hi" for every axis, or one "lo:hi" per axis separated by commas.
Box parse_window(const std::string& text, std::size_t dim) {
  if (text.empty()) throw Error(ErrorKind::Malformed, "--window is required");
  std::vector<Interval> axes;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string part = text.substr(start, end - start);
    const std::size_t colon = part.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::Malformed, "--window: expected lo:hi, got \"" + part + "\"");
    axes.push_back({Extended(parse_rational(part.substr(0, colon))), Extended(parse_rational(part.substr(colon + 1)))});
    start = end + 1;
  }
  if (axes.size() == 1) axes.assign(dim, axes[0]);
  if (axes.size() != dim) throw Error(ErrorKind::Malformed, "--window has " + std::to_string(axes.size()) + " axes, the input has " + std::to_string(dim));
  return Box(std::move(axes));
}

SamplePlan make_plan(const Shared& s, std::size_t dim) {
  SamplePlan p;
  p.window = parse_window(s.window, dim);
  p.step = parse_rational(s.step);
  if (p.step <= 0) throw Error(ErrorKind::Malformed, "--step must be positive");
  p.count = s.samples;
  p.seed = s.seed;
  return p;
}

std::string point_text(const Point& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + to_string(x[i]);
  return s + ")";
}

void print_report(const VerificationReport& r) {
  for (const auto& n : r.nodes) {
    if (n.tier != Tier::Failed) continue;
    std::cout << "FAILED " << n.path << " [" << node_kind_name(n.kind) << "] " << n.detail;
    if (n.witness) std::cout << " witness " << point_text(*n.witness);
    std::cout << '\n';
  }
  std::cout << "nodes: " << r.nodes.size() << '\n' << "tier: " << tier_name(r.aggregate) << '\n';
}

int refine_cmd(const std::string& op, const std::string& in, const std::string& out, const Shared& s) {
  const Cover c = io::decode_cover(io::read_file(in));
  Cover result;
  if (op == "mather") {
    result = mather(c);
  } else if (op == "disjointify") {
    result = disjointify(c).cover;
  } else if (op == "zigzag") {
    const SamplePlan plan = make_plan(s, c.dim());
    result = zigzag_refine(c, default_zigzag_params(static_cast<long>(c.size()) + 2), plan).cover;
  } else {
    result = chain_from_countable(c);
  }
  io::write_file(out, io::encode(result));
  std::cout << op << ": " << c.size() << " -> " << result.size() << " elements\n";
  if (!s.window.empty() && result.finite()) {
    const CoverReport r = check_cover(result, make_plan(s, c.dim()));
    std::cout << "coverage: " << verdict_name(r.coverage.kind) << '\n';
    if (!r.ok()) {
      if (r.failed_element) std::cout << "incompatible element " << *r.failed_element << '\n';
      return Fail;
    }
  }
  return Pass;
}

int decompose_cmd(const std::string& in, const std::string& out, const Shared& s) {
  const Cover c = io::decode_cover(io::read_file(in));
  const Cert cert = decompose(c, make_plan(s, c.dim()));
  io::write_file(out, io::encode(cert));
  std::cout << "nodes: " << node_total(cert) << '\n'
            << "depth: " << depth(cert) << '\n'
            << "axiom leaves: " << (leaves_are_axioms(cert) ? "yes" : "no") << '\n';
  return Pass;
}

int verify_cmd(const std::string& cert_path, const std::string& report, const Shared& s) {
  const Cert cert = io::decode_cert(io::read_file(cert_path));
  const VerificationReport r = verify(cert, make_plan(s, cert->cover.dim()));
  if (!report.empty()) io::write_file(report, io::encode(r));
  print_report(r);
  return r.failed() ? Fail : Pass;
}

int lebesgue_cmd(const std::string& in, const std::string& out, const std::string& dmax, const std::string& delta, const Shared& s) {
  const Cover c = io::decode_cover(io::read_file(in));
  const PLFunction profile = lebesgue_profile(c, parse_rational(dmax), parse_rational(delta));
  const Rescaler r = build_rescaler(profile, c.dim());
  if (!out.empty()) io::write_file(out, io::encode(r));
  std::cout << "profile min: " << to_string(profile.min_value()) << '\n'
            << "fixed point: " << to_string(r.fixed_point) << '\n'
            << "b(0): " << to_string(r.b(Rational(0))) << '\n';
  if (s.window.empty()) return Pass;
  SamplePlan plan = make_plan(s, c.dim());
  const LebesgueReport rep = verify_lebesgue(c, r.map(), random_points(plan));
  std::cout << "checked: " << rep.checked << ", failed: " << rep.failed << '\n';
  if (rep.witness) std::cout << "witness " << point_text(*rep.witness) << '\n';
  return rep.ok() ? Pass : Fail;
}

int euclid_cmd(const std::string& in, const std::string& out, const std::string& delta, const Shared& s) {
  const Cover c = io::decode_cover(io::read_file(in));
  const SamplePlan plan = make_plan(s, c.dim());
  const EuclidResult e = euclid_decompose(c, plan.window, parse_rational(delta));
  if (!out.empty()) io::write_file(out, io::encode(e.certificate));
  std::cout << "dilation: " << to_string(e.map.dilation) << '\n' << "b(0): " << to_string(e.map.b(Rational(0))) << '\n';
  const VerificationReport r = verify(e.certificate, plan);
  print_report(r);
  return r.failed() ? Fail : Pass;
}

struct Loaded {
  Site site;
  std::optional<Presheaf> f;
};

void load(Loaded& l, const std::string& site, const std::string& presheaf) {
  l.site = io::decode_site(io::read_file(site));
  l.f.emplace(io::decode_presheaf(io::read_file(presheaf), l.site));
  const ValidationReport v = validate(*l.f);
  if (v.ok()) return;
  std::string msg = "presheaf is not a functor of complexes:";
  for (const auto& x : v.violations) msg += "\n  " + x.what + " at " + x.where + (x.degree ? " in degree " + std::to_string(*x.degree) : "");
  throw Error(ErrorKind::Malformed, msg);
}

int descent_cmd(const std::string& site, const std::string& presheaf) {
  Loaded l;
  load(l, site, presheaf);
  const Presheaf& f = *l.f;
  for (std::size_t c = 0; c < l.site.covers.size(); ++c) {
    if (l.site.covers[c].members.size() != 2) continue;
    const QuasiIsoReport q = kernel_quasi_iso(f, l.site.covers[c]);
    std::cout << "cover " << c << " kernel quasi-isomorphism: " << (q.holds ? "yes" : "no") << '\n';
  }
  std::cout << "flabby: " << (check_flabby(f).holds ? "yes" : "no") << '\n';
  const DescentVerdict d = descent_check(f);
  if (d.holds) {
    std::cout << "descent: holds\n";
    return Pass;
  }
  std::cout << "descent: fails (" << d.hypothesis << ") on cover " << *d.cover << " in degree " << *d.degree << ": " << d.detail << '\n';
  return Fail;
}

int cech_cmd(const std::string& site, const std::string& presheaf) {
  Loaded l;
  load(l, site, presheaf);
  bool acyclic = true;
  for (std::size_t c = 0; c < l.site.covers.size(); ++c) {
    const SiteCover& cover = l.site.covers[c];
    const auto h = cech_cohomology(*l.f, cover);
    std::cout << "cover " << c << " ranks:";
    for (auto r : h) std::cout << ' ' << r;
    std::cout << '\n';
    for (std::size_t p = 1; p < h.size(); ++p) acyclic = acyclic && h[p] == 0;
    acyclic = acyclic && h[0] == l.f->dim(cover.top, 0);
  }
  std::cout << "acyclic: " << (acyclic ? "yes" : "no") << '\n';
  return acyclic ? Pass : Fail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified refinement and decomposition of open covers"};
  app.require_subcommand(1);
  Shared shared;
  app.add_option("--window", shared.window, "Sampling window: lo:hi for every axis, or lo:hi,lo:hi,...");
  app.add_option("--step", shared.step, "Grid step (rational)");
  app.add_option("--samples", shared.samples, "Random sample count");
  app.add_option("--seed", shared.seed, "Sampling seed");
  app.add_option("--threads", shared.threads, "Worker cap (work currently runs on one thread)")->check(CLI::PositiveNumber);

  std::string in, out, op, cert, report, site, presheaf, dmax = "8", delta = "1/20";
  auto* refine = app.add_subcommand("refine", "Mather partition, disjoint refinement, zigzag or chain");
  refine->add_option("--op", op)->required()->check(CLI::IsMember({"mather", "disjointify", "zigzag", "chain"}));
  refine->add_option("--in", in)->required();
  refine->add_option("--out", out)->required();

  auto* decomp = app.add_subcommand("decompose", "Decomposition certificate for a cover");
  decomp->add_option("--in", in)->required();
  decomp->add_option("--out", out)->required();

  auto* ver = app.add_subcommand("verify", "Check a certificate on a window");
  ver->add_option("--cert", cert)->required();
  ver->add_option("--budget", shared.samples, "Random sample count (same as --samples)");
  ver->add_option("--report", report, "Write the per-node report as JSON");

  auto* leb = app.add_subcommand("lebesgue", "Profile and rescaler for a cover");
  leb->add_option("--in", in)->required();
  leb->add_option("--out", out);
  leb->add_option("--dmax", dmax);
  leb->add_option("--delta", delta);

  auto* euc = app.add_subcommand("euclid", "Rescaled cube certificate for a cover of the whole space");
  euc->add_option("--in", in)->required();
  euc->add_option("--out", out);
  euc->add_option("--delta", delta);

  auto* desc = app.add_subcommand("descent", "Descent checks for a presheaf of complexes");
  desc->add_option("--site", site)->required();
  desc->add_option("--presheaf", presheaf)->required();

  auto* cech = app.add_subcommand("cech", "Cech cohomology ranks of every designated cover");
  cech->add_option("--site", site)->required();
  cech->add_option("--presheaf", presheaf)->required();

  for (auto* sub : {refine, decomp, ver, leb, euc, desc, cech}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return BadInput;
  }

  try {
    if (*refine) return refine_cmd(op, in, out, shared);
    if (*decomp) return decompose_cmd(in, out, shared);
    if (*ver) return verify_cmd(cert, report, shared);
    if (*leb) return lebesgue_cmd(in, out, dmax, delta, shared);
    if (*euc) return euclid_cmd(in, out, delta, shared);
    if (*desc) return descent_cmd(site, presheaf);
    if (*cech) return cech_cmd(site, presheaf);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CoverageGap) {
      std::cout << "coverage gap: " << e.what() << '\n';
      return Fail;
    }
    std::cerr << "error: " << e.what() << '\n';
    return BadInput;
  }
  return BadInput;
}
