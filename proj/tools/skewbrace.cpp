// skewbrace: command-line front end.

#include <CLI11.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "skewbrace/skewbrace.hpp"

namespace sb = skewbrace;
using sb::u64;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBound = 3;

const char* kFooter = R"(TSV output (--format tsv), one header row then data rows:
  group info   spec order exponent rank small_rank omega_sizes histogram
  enumerate    index abelian histogram center_order gamma_file
  example      check verdict detail
  verify       check verdict detail
Verdicts: pass, fail, paper-gap, vacuous, info, note, skipped.
omega_sizes lists |Omega_i| for i = 1..log_p(exponent), comma-joined.
Histograms are order:count pairs, comma-joined, ascending by order.
gamma_file is '-' unless --emit-dir is given.

Exit codes: 0 pass, 1 check failure, 2 usage or parse error, 3 size bound.)";

struct RunConfig {
  std::string format = "human";
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint64_t samples = 10000;
  std::uint64_t triple_samples = 100000;
  std::uint64_t max_order = sb::EnumerationBounds{}.max_order;
  std::uint64_t free_order = sb::EnumerationBounds{}.free_order;
  std::uint64_t max_aut = sb::EnumerationBounds{}.max_aut;

  bool tsv() const { return format == "tsv"; }
  sb::CheckOptions options() const {
    sb::CheckOptions o;
    o.seed = seed;
    o.workers = workers;
    o.samples = samples;
    o.triple_samples = triple_samples;
    return o;
  }
  sb::EnumerationBounds bounds() const {
    sb::EnumerationBounds b;
    b.free_order = free_order;
    b.max_order = max_order;
    b.max_aut = max_aut;
    return b;
  }
};

/// Verdict rows shared by `example` and `verify`.
class Report {
 public:
  explicit Report(bool tsv) : tsv_(tsv) {}

  void row(const std::string& check, const std::string& verdict, const std::string& detail = "") {
    rows_.push_back({check, verdict, detail});
    if (verdict == "fail") failed_ = true;
  }
  void check(const std::string& name, bool ok, const std::string& detail = "") {
    row(name, ok ? "pass" : "fail", detail);
  }
  bool failed() const { return failed_; }

  void print(std::ostream& out) const {
    if (tsv_) {
      out << "check\tverdict\tdetail\n";
      for (const auto& r : rows_) out << r[0] << '\t' << r[1] << '\t' << r[2] << '\n';
      return;
    }
    std::size_t w = 0;
    for (const auto& r : rows_) w = std::max(w, r[0].size());
    for (const auto& r : rows_) {
      out << r[0] << std::string(w + 2 - r[0].size(), ' ') << r[1];
      if (!r[2].empty()) out << "  " << r[2];
      out << '\n';
    }
    out << (failed_ ? "result: FAIL\n" : "result: PASS\n");
  }

 private:
  bool tsv_;
  bool failed_ = false;
  std::vector<std::array<std::string, 3>> rows_;
};

std::string sweep_detail(bool exhaustive, std::uint64_t n, const char* unit) {
  return std::string(exhaustive ? "exhaustive " : "sampled ") + std::to_string(n) + " " + unit;
}

std::string triple_literal(const std::tuple<sb::GroupElement, sb::GroupElement, sb::GroupElement>& t) {
  return std::get<0>(t).literal() + " " + std::get<1>(t).literal() + " " + std::get<2>(t).literal();
}

void report_gamma(Report& rep, const sb::GammaValidation& v) {
  std::string detail = std::to_string(v.pairs_checked) + " pairs";
  if (v.witness) detail += "; witness h=" + v.witness->first.literal() + " g=" + v.witness->second.literal();
  if (v.premise_witness) detail += "; premise fails at x=" + v.premise_witness->literal();
  if (!v.passed() && !v.reason.empty()) detail += "; " + v.reason;
  rep.row("gamma_validation", v.passed() ? sb::to_string(v.mode) : "fail", detail);
}

void report_axiom(Report& rep, const std::string& name, const sb::AxiomReport& a, bool asserted = true) {
  std::string detail = sweep_detail(a.exhaustive, a.triples_checked, "triples");
  if (a.witness) detail += "; witness " + triple_literal(*a.witness);
  if (asserted)
    rep.check(name, a.holds(), detail);
  else
    rep.row(name, "info", std::string(a.holds() ? "yes; " : "no; ") + detail);
}

std::string omega_levels(const sb::OmegaContainmentReport& r) {
  std::string s;
  for (const auto& l : r.levels) {
    if (!s.empty()) s += ' ';
    s += "i=" + std::to_string(l.i) + ":" + std::to_string(l.additive_size) + "/" +
         std::to_string(l.circle_size);
    if (!l.contained) s += "(witness " + l.witness->literal() + ")";
  }
  return s;
}

void report_omega(Report& rep, const sb::OmegaContainmentReport& r) {
  std::string detail = omega_levels(r) + " (|Omega_i(+)|/|Omega_i(o)|)";
  if (r.guaranteed)
    rep.check("omega_containment", r.all_contained(), detail);
  else
    rep.row("omega_containment", "info", std::string(r.all_contained() ? "contained; " : "not contained; ") + detail);
}

void report_power_formula(Report& rep, const sb::PowerFormulaReport& r) {
  std::string detail = sweep_detail(r.exhaustive, r.checked, "elements");
  if (r.witness) detail += "; witness " + r.witness->literal();
  rep.check("power_formula", r.holds(), detail);
}

int cmd_group_info(const RunConfig& cfg, const std::string& text) {
  sb::GroupSpec g = sb::parse_spec(text);
  sb::OrderHistogram h = sb::order_histogram(g);
  std::string omegas;
  for (int i = 1; i <= g.log_exponent(); ++i) {
    if (i > 1) omegas += ',';
    u64 n = 0;
    for (const auto& [order, count] : h)
      if (order <= static_cast<u64>(sb::arith::ipow(g.prime(), i))) n += count;
    omegas += std::to_string(n);
  }
  const std::string small = sb::is_small_rank(g) ? "yes" : "no";
  const u64 exponent = static_cast<u64>(sb::arith::ipow(g.prime(), g.log_exponent()));
  if (cfg.tsv()) {
    std::cout << "spec\torder\texponent\trank\tsmall_rank\tomega_sizes\thistogram\n";
    std::cout << g.to_string() << '\t' << g.order() << '\t' << exponent << '\t' << g.rank() << '\t' << small << '\t'
              << omegas << '\t' << sb::format_histogram(h) << '\n';
  } else {
    std::cout << "group       " << g.to_string() << '\n'
              << "order       " << g.order() << '\n'
              << "exponent    " << exponent << '\n'
              << "rank        " << g.rank() << '\n'
              << "small rank  " << small << " (small means rank < p-1 = " << g.prime() - 1 << ")\n"
              << "|Omega_i|   " << omegas << '\n'
              << "histogram   " << sb::format_histogram(h) << '\n';
  }
  return kExitPass;
}

int cmd_enumerate(const RunConfig& cfg, const std::string& text, const std::string& emit_dir) {
  sb::GroupSpec g = sb::parse_spec(text);
  auto subs = sb::enumerate_regular_subgroups(g, cfg.options(), cfg.bounds());
  if (!emit_dir.empty()) std::filesystem::create_directories(emit_dir);
  if (cfg.tsv())
    std::cout << "index\tabelian\thistogram\tcenter_order\tgamma_file\n";
  else
    std::cout << "group " << g.to_string() << ": " << subs.size() << " regular subgroups of Hol(G)\n";
  for (std::size_t i = 0; i < subs.size(); ++i) {
    sb::Brace b = sb::subgroup_to_gamma(subs[i], cfg.workers);
    sb::Fingerprint f = sb::fingerprint(b);
    std::string file = "-";
    if (!emit_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "brace-%04zu.txt", i + 1);
      file = (std::filesystem::path(emit_dir) / name).string();
      sb::write_brace_file(file, b.gamma());
    }
    if (cfg.tsv()) {
      std::cout << i + 1 << '\t' << (f.abelian ? "yes" : "no") << '\t' << sb::format_histogram(f.histogram) << '\t'
                << f.center_order << '\t' << file << '\n';
    } else {
      std::cout << "  #" << i + 1 << "  " << (f.abelian ? "abelian    " : "non-abelian") << "  circle orders "
                << sb::format_histogram(f.histogram) << "  |Z| = " << f.center_order;
      if (file != "-") std::cout << "  -> " << file;
      std::cout << '\n';
    }
  }
  return kExitPass;
}

int cmd_example(const RunConfig& cfg, std::int64_t p, int k, const std::string& emit) {
  const sb::CheckOptions opt = cfg.options();
  Report rep(cfg.tsv());
  if (!sb::arith::is_prime(p)) throw sb::ParseError("--p " + std::to_string(p) + " is not prime");
  if (k < 1) throw sb::ParseError("--k must be at least 1");
  sb::TruncatedCyclotomicRing ring = sb::build_ring(p, k);
  rep.row("ring_invariants", "pass", "omega^p = 1, Phi_p(omega) = 0, (omega-1)^(p-1) = p*U, U invertible");
  rep.row("group", "info", ring.spec().to_string() + ", |H| = " + std::to_string(ring.ideal_order()));

  sb::GammaFunction gamma = sb::GammaFunction::kernel_hom(ring.spec(), ring.coefficient_sum(), 1, ring.omega());
  sb::GammaValidation v = sb::validate_gamma(ring.spec(), gamma, opt);
  report_gamma(rep, v);
  if (!v.passed()) {
    rep.print(std::cout);
    return kExitCheckFailed;
  }
  sb::ExampleBrace ex{ring, sb::Brace::trusted(ring.spec(), gamma, opt.workers)};
  if (!emit.empty()) sb::write_brace_file(emit, ex.brace.gamma());

  report_axiom(rep, "brace_axiom", sb::check_brace_axiom(ex.brace, opt));

  sb::PropositionReport pr = sb::verify_proposition_examples(ex, opt);
  if (pr.non_abelian) {
    rep.row("clause1_non_abelian", "pass",
            "u=" + pr.non_commuting->first.literal() + " h=" + pr.non_commuting->second.literal() + " do not commute");
  } else if (pr.clause1_unattainable) {
    rep.row("clause1_non_abelian", "paper-gap", "circle group abelian (every group of order p or p^2 is abelian)");
  } else {
    rep.row("clause1_non_abelian", "fail", "no non-commuting pair found");
  }
  auto sweep_row = [&](const std::string& name, const sb::SweepReport& s, const std::string& what) {
    std::string detail = what + "; " + sweep_detail(s.exhaustive, s.checked, "elements");
    if (s.witness) detail += "; witness " + s.witness->literal();
    rep.check(name, s.passed(), detail);
  };
  sweep_row("clause2_orders_in_ideal", pr.inside, "additive order = circle order on H");
  sweep_row("clause3_orders_outside", pr.outside,
            "additive order " + std::to_string(sb::arith::ipow(p, k)) + ", circle order " + std::to_string(p) +
                " off H");
  rep.check("ideal_index_p", pr.ideal_maximal, "|G:H| = " + std::to_string(p));
  if (pr.degenerate_k) rep.row("degenerate_k", "note", "k = 1: additive and circle orders outside H both equal p");

  sweep_row("fact1_circle_order_p", sb::fact1_check(ex, opt), "circle order p off H");
  sweep_row("conjugation_identity", sb::conjugation_identity_check(ex, opt), "u^-1 o h o u = omega h on H");
  sb::CoincideReport co = sb::operations_coincide_on_ideal(ex, opt);
  {
    std::string detail = sweep_detail(co.sweep.exhaustive, co.sweep.checked, "pairs");
    if (co.sweep.witness) detail += "; witness " + co.sweep.witness->literal() + " " + co.partner->literal();
    rep.check("ideal_operations_coincide", co.passed(), detail);
  }
  report_power_formula(rep, sb::check_power_formula(ex.brace, opt));
  report_axiom(rep, "biskew", sb::check_biskew(ex.brace, opt));

  if (ring.spec().materializable()) {
    sb::OmegaContainmentReport om = sb::check_omega_containment(ex.brace, opt);
    report_omega(rep, om);
    rep.row("additive_histogram", "info", sb::format_histogram(sb::order_histogram(ring.spec())));
    rep.row("circle_histogram", "info", sb::format_histogram(sb::order_histogram_circle(ex.brace, opt)));
  } else {
    rep.row("omega_containment", "skipped", "group above materialization bound");
  }
  if (!emit.empty()) rep.row("emitted", "info", emit);
  rep.print(std::cout);
  return rep.failed() ? kExitCheckFailed : kExitPass;
}

int cmd_verify(const RunConfig& cfg, const std::string& path) {
  const sb::CheckOptions opt = cfg.options();
  sb::BraceFile f = sb::read_brace_file(path);
  Report rep(cfg.tsv());
  rep.row("group", "info", f.spec.to_string());
  sb::GammaValidation v = sb::validate_gamma(f.spec, f.gamma, opt);
  report_gamma(rep, v);
  if (!v.passed()) {
    rep.print(std::cout);
    return kExitCheckFailed;
  }
  sb::Brace b = sb::Brace::trusted(f.spec, f.gamma, opt.workers);
  report_axiom(rep, "brace_axiom", sb::check_brace_axiom(b, opt));
  if (!f.spec.materializable()) {
    rep.row("histograms", "skipped", "group above materialization bound");
    rep.print(std::cout);
    return rep.failed() ? kExitCheckFailed : kExitPass;
  }
  rep.row("additive_histogram", "info", sb::format_histogram(sb::order_histogram(f.spec)));
  rep.row("circle_histogram", "info", sb::format_histogram(sb::order_histogram_circle(b, opt)));
  if (f.spec.order() <= sb::kRankSearchBound) {
    sb::SmallRankReport t = sb::check_theorem_small_rank(b, opt);
    std::string ranks = "rank(+) = " + std::to_string(t.additive_rank) + ", rank(o) = " +
                        std::to_string(t.circle_rank) + ", p-1 = " + std::to_string(b.prime() - 1);
    if (t.vacuous) {
      rep.row("small_rank_iff", "vacuous", ranks + "; p = 2 makes small rank mean rank 0");
      rep.row("small_rank_histograms", "vacuous", "p = 2");
    } else {
      rep.check("small_rank_iff", t.iff_holds(), ranks);
      if (t.histogram_asserted)
        rep.check("small_rank_histograms", t.histograms_equal, "both ranks small: histograms must agree");
      else
        rep.row("small_rank_histograms", "info",
                std::string(t.histograms_equal ? "equal" : "differ") + "; not both of small rank");
    }
  } else {
    rep.row("small_rank_iff", "skipped", "circle rank search limited to order <= 4096");
  }
  report_omega(rep, sb::check_omega_containment(b, opt));
  report_axiom(rep, "biskew", sb::check_biskew(b, opt), false);
  rep.print(std::cout);
  return rep.failed() ? kExitCheckFailed : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct, validate and enumerate braces on finite abelian p-groups."};
  app.footer(kFooter);
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"human", "tsv"}))
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for sampled checks")->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker threads for sweeps")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  app.add_option("--samples", cfg.samples, "Random elements or pairs for sampled checks")->capture_default_str();
  app.add_option("--triple-samples", cfg.triple_samples, "Random triples for sampled axiom checks")
      ->capture_default_str();
  app.add_option("--max-order", cfg.max_order, "Enumeration: largest group order")->capture_default_str();
  app.add_option("--free-order", cfg.free_order, "Enumeration: order below which Aut(G) is not bounded")
      ->capture_default_str();
  app.add_option("--max-aut", cfg.max_aut, "Enumeration: largest |Aut(G)| above the free order")
      ->capture_default_str();

  std::string spec_text, emit_dir, emit_file, path;
  std::int64_t p = 0;
  int k = 0;

  auto* group = app.add_subcommand("group", "Group-level reports")->require_subcommand(1);
  group->fallthrough();
  auto* info = group->add_subcommand("info", "Order, exponent, rank, Omega sizes and order histogram");
  info->add_option("SPEC", spec_text, "Group spec p:[e1,...,er]")->required();
  info->fallthrough();

  auto* enumerate = app.add_subcommand("enumerate", "List every brace on G (regular subgroups of Hol(G))");
  enumerate->add_option("SPEC", spec_text, "Group spec p:[e1,...,er]")->required();
  enumerate->add_option("--emit-dir", emit_dir, "Write one brace-v1 file per brace into this directory");
  enumerate->fallthrough();

  auto* example = app.add_subcommand("example", "Build and verify the brace on E/p^kE, E = Z_p[omega]");
  example->add_option("--p", p, "Prime")->required();
  example->add_option("--k", k, "Truncation level")->required();
  example->add_option("--emit", emit_file, "Write the brace-v1 file here");
  example->fallthrough();

  auto* verify = app.add_subcommand("verify", "Validate a brace-v1 file and report its invariants");
  verify->add_option("FILE", path, "brace-v1 file")->required();
  verify->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*info) return cmd_group_info(cfg, spec_text);
    if (*enumerate) return cmd_enumerate(cfg, spec_text, emit_dir);
    if (*example) return cmd_example(cfg, p, k, emit_file);
    if (*verify) return cmd_verify(cfg, path);
  } catch (const sb::BoundExceeded& e) {
    std::cerr << "error: size bound: " << e.what() << '\n';
    return kExitBound;
  } catch (const sb::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const sb::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const sb::InvariantError& e) {
    std::cerr << "error: invariant violated: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const sb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
