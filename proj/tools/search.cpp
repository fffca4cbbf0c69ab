// search: command-line front end for the block-search toolkit.

#include <blocksearch/accuracy.hpp>
#include <blocksearch/advisor.hpp>
#include <blocksearch/asymptotics.hpp>
#include <blocksearch/json_io.hpp>
#include <blocksearch/oracle.hpp>
#include <blocksearch/runtime.hpp>
#include <blocksearch/sequences.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace blocksearch;

namespace {

struct Options {
  std::string policy = "golden";
  int i = 2;
  int steps = 5;
  std::string alpha1;
  std::string format = "tsv";
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string log_dir;
  std::string peak = "0.5";
  std::string lo = "0", hi = "1";
  bool from_stdin = false;
  bool witness = false;
  double tolerance = 0;
  int i_max = 6;
};

/// --policy takes a JSON object or a type name completed by --i, --steps
/// (as horizon) and --alpha1.
PolicySpec make_policy(const Options& o) {
  if (!o.policy.empty() && o.policy.front() == '{') return policy_from_json(Json::parse(o.policy));
  Json j{{"type", o.policy}, {"i", o.i}, {"horizon", o.steps}};
  if (!o.alpha1.empty()) j["alpha1"] = o.alpha1;
  return policy_from_json(j);
}

void emit(const Options& o, const Json& j, const std::function<void()>& tsv) {
  if (o.format == "json") std::cout << j.dump(2) << '\n';
  else tsv();
}

std::string fmt(const QuadNum& x) {
  std::ostringstream os;
  os.precision(17);
  os << x.to_string() << '\t' << x.to_double();
  return os.str();
}

int cmd_sequences(const Options& o) {
  SeqTable f = f_seq(o.i, o.steps), g = g_seq(o.i, o.steps), e = e_seq(o.i, o.steps);
  Json rows = Json::array();
  for (int n = 0; n <= o.steps; ++n)
    rows.push_back({{"n", n}, {"F", f.at(n).get_str()}, {"G", g.at(n).get_str()}, {"E", e.at(n).get_str()}});
  emit(o, {{"i", o.i}, {"rows", rows}}, [&] {
    std::cout << "n\tF\tG\tE\n";
    for (const auto& r : rows)
      std::cout << r["n"] << '\t' << r["F"].get<std::string>() << '\t' << r["G"].get<std::string>()
                << '\t' << r["E"].get<std::string>() << '\n';
  });
  return 0;
}

int cmd_accuracy(const Options& o) {
  PolicySpec p = make_policy(o);
  Json rows = Json::array();
  int last = o.steps;
  if (auto h = policy_horizon(p)) last = std::min(last, *h);
  for (int n = 1; n <= last; ++n) {
    QuadNum d = step_accuracy(p, n);
    rows.push_back({{"n", n},
                    {"delta", to_json(d)},
                    {"weighted", to_json(QuadNum(BigRational(accuracy_weight(p, n))) * d)}});
  }
  Json out{{"policy", policy_to_json(p)}, {"steps", rows}};
  if (!policy_horizon(p) && o.steps >= 4) out["general"] = to_json(general_accuracy(p, o.steps));
  emit(o, out, [&] {
    std::cout << "n\texact\tfloat\tweighted\n";
    for (const auto& r : rows)
      std::cout << r["n"] << '\t' << r["delta"]["exact"].get<std::string>() << '\t'
                << r["delta"]["float"].get<double>() << '\t' << r["weighted"]["float"].get<double>() << '\n';
    if (out.contains("general")) {
      const Json& g = out["general"];
      std::cout << "general\t" << g["sup"]["exact"].get<std::string>() << '\t' << g["sup"]["float"]
                << "\tattained_at=" << g["attained_at"] << "\tconverged=" << g["converged"] << '\n';
    }
  });
  return 0;
}

int cmd_verify(const Options& o) {
  std::vector<VerificationReport> reports;
  for (int i = 1; i <= o.i_max; ++i) reports.push_back(check_all_identities(i, 40));
  // The ratio claims concern block orders i >= 2.
  for (int i = 2; i <= o.i_max; ++i) reports.push_back(check_monotone_ratios(i, 40));
  if (o.i_max >= 2) reports.push_back(verify_inequalities(2, o.i_max));
  bool ok = true;
  Json out = Json::array();
  for (const auto& r : reports) {
    ok = ok && r.all_ok();
    out.push_back(to_json(r));
  }
  emit(o, {{"ok", ok}, {"reports", out}}, [&] {
    for (const auto& r : reports)
      std::cout << (r.all_ok() ? "PASS" : "FAIL") << '\t' << r.name << '\t' << r.items.size() << " checks\t"
                << r.failures() << " failures\n";
  });
  return ok ? 0 : 1;
}

int cmd_oracle(const Options& o) {
  PolicySpec p = make_policy(o);
  OracleResult r = worst_case_accuracy(p, o.steps);
  Json out = to_json(r);
  if (o.witness) out["witness"] = to_json(witness_function(p, o.steps, r.worst));
  emit(o, out, [&] {
    std::cout << fmt(r.value) << '\n';
    if (o.witness) std::cout << out["witness"].dump() << '\n';
  });
  return 0;
}

int cmd_ratios(const Options& o) {
  LimitRatioReport r = limit_ratio_check(make_policy(o), o.steps);
  Json out = to_json(r);
  emit(o, out, [&] {
    std::cout << "n\tdelta_ratio\tDelta_ratio\n";
    for (const auto& pt : r.ratios)
      std::cout << pt.n << '\t' << pt.delta_ratio.to_double() << '\t' << pt.Delta_ratio.to_double() << '\n';
    std::cout << "phi";
    for (const auto& e : r.phi.phi) std::cout << '\t' << e.label() << '=' << e.value.to_double();
    std::cout << "\nproduct\t" << r.product_lower_bound.to_double() << '\n';
    if (r.truncated_at) std::cout << "truncated_at\t" << *r.truncated_at << '\t' << r.truncation_reason << '\n';
  });
  return 0;
}

int cmd_run(const Options& o) {
  PolicySpec p = make_policy(o);
  QuadNum lo = QuadNum::parse(o.lo), hi = QuadNum::parse(o.hi);
  StopRule stop;
  stop.steps = o.steps;
  if (o.tolerance > 0) stop.tolerance = o.tolerance;
  Evaluator f;
  if (o.from_stdin) {
    // Interactive: print each test point, read its measured value.
    f = [](const QuadNum& x) {
      std::cerr << "f(" << x.to_double() << ") = ";
      double v;
      if (!(std::cin >> v)) throw std::runtime_error("no value on stdin");
      return Value::of(v);
    };
  } else {
    QuadNum c = QuadNum::parse(o.peak);
    f = from_exact([c](const QuadNum& x) { return -abs(x - c); });
  }
  SearchResult r = run_search(f, p, lo, hi, stop);
  emit(o, to_json(r), [&] {
    std::cout << "estimate\t" << fmt(r.estimate) << "\ninterval\t" << r.lo.to_double() << '\t'
              << r.hi.to_double() << "\nbound\t" << fmt(r.error_bound) << "\nsteps\t" << r.steps << '\n';
  });
  return 0;
}

int cmd_serve(const Options& o) {
  std::unique_ptr<AdvisorStore> store =
      o.log_dir.empty() ? std::make_unique<AdvisorStore>() : std::make_unique<AdvisorStore>(o.log_dir);
  httplib::Server svr;
  install_routes(svr, *store);
  std::cerr << "advisor listening on " << o.host << ':' << o.port << '\n';
  if (!svr.listen(o.host, o.port)) {
    std::cerr << "cannot bind " << o.host << ':' << o.port << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unimodal block search: policies, exact accuracies, oracle and advisor"};
  app.require_subcommand(1);
  Options o;
  auto policy_flags = [&](CLI::App* c) {
    c->add_option("--policy", o.policy, "policy type name or JSON object");
    c->add_option("--i", o.i, "block order");
    c->add_option("--steps", o.steps, "number of steps (also the horizon of fixed-horizon policies)");
    c->add_option("--alpha1", o.alpha1, "first gap of a basic policy, exact or decimal");
  };
  auto format_flag = [&](CLI::App* c) {
    c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "tsv"}));
  };

  auto* run = app.add_subcommand("run", "search a synthetic peak or values typed on stdin");
  policy_flags(run);
  format_flag(run);
  run->add_option("--peak", o.peak, "location of the synthetic peak");
  run->add_option("--lo", o.lo, "left end");
  run->add_option("--hi", o.hi, "right end");
  run->add_option("--tolerance", o.tolerance, "stop once the error bound is this small");
  run->add_flag("--stdin", o.from_stdin, "read function values from stdin");

  auto* acc = app.add_subcommand("accuracy", "exact step accuracy and general accuracy");
  policy_flags(acc);
  format_flag(acc);

  auto* ver = app.add_subcommand("verify", "check sequence identities and threshold inequalities");
  ver->add_option("--i", o.i_max, "largest block order to check");
  format_flag(ver);

  auto* orc = app.add_subcommand("oracle", "brute-force worst case accuracy");
  policy_flags(orc);
  format_flag(orc);
  orc->add_flag("--witness", o.witness, "emit a witness function for the worst branch");

  auto* seq = app.add_subcommand("sequences", "F, G and E tables");
  seq->add_option("--i", o.i, "block order");
  seq->add_option("--steps", o.steps, "last index");
  format_flag(seq);

  auto* rat = app.add_subcommand("ratios", "accuracy ratios against the optimal-at-infinity trace");
  policy_flags(rat);
  format_flag(rat);

  auto* srv = app.add_subcommand("advise-serve", "run the experiment advisor HTTP service");
  srv->add_option("--port", o.port, "TCP port");
  srv->add_option("--host", o.host, "bind address");
  srv->add_option("--log-dir", o.log_dir, "directory for session event logs");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(o);
    if (*acc) return cmd_accuracy(o);
    if (*ver) return cmd_verify(o);
    if (*orc) return cmd_oracle(o);
    if (*seq) return cmd_sequences(o);
    if (*rat) return cmd_ratios(o);
    if (*srv) return cmd_serve(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
