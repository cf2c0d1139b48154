// gsp4lab: command-line front end to the kernel, moment and special-function
// routines. JSON on stdout by default; sweeps write CSV.
//
// Exit status: 0 success, 1 domain error, 2 usage error.

#include "gsp4/bessel.hpp"
#include "gsp4/expsums.hpp"
#include "gsp4/formsdata.hpp"
#include "gsp4/lfun.hpp"
#include "gsp4/moments.hpp"
#include "gsp4/parallel.hpp"
#include "gsp4/petersson.hpp"
#include "gsp4/psi.hpp"
#include "gsp4/weight.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <algorithm>
#include <functional>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace gsp4;

namespace {

constexpr int kSchemaVersion = 1;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json policy_json(const TruncationPolicy& p) {
  return {{"eps", p.eps},
          {"rank1_cs_max", p.rank1_cs_max},
          {"rank2_norm_max", p.rank2_norm_max},
          {"rank2_det_max", p.rank2_det_max}};
}

json kernel_json(const KernelValue& v) {
  return {{"diagonal", v.diagonal},     {"rank1", v.rank1},
          {"rank2", v.rank2},           {"total", v.total},
          {"tail_bound", v.tail_bound}, {"rank1_tail", v.rank1_tail},
          {"rank2_tail", v.rank2_tail}, {"certified", v.certified},
          {"failed", v.failed},         {"rank1_terms", v.rank1_terms},
          {"rank2_terms", v.rank2_terms}, {"policy", policy_json(v.policy)}};
}

json report_json(const MomentReport& r) {
  return {{"kind", r.kind},         {"k", r.k},
          {"q1", r.q1},             {"q2", r.q2},
          {"N", r.N},               {"geometric", r.geometric},
          {"main", r.main},         {"residual", r.residual},
          {"diagonal", r.diagonal}, {"tail", r.tail},
          {"sum_tail", r.sum_tail}, {"m_max", r.m_max},
          {"x_max", r.x_max},       {"kernels", r.kernels},
          {"certified", r.certified}};
}

// a:b[:step] or a comma separated list.
template <typename T>
std::vector<T> parse_range(const std::string& text) {
  std::vector<T> out;
  if (text.find(':') != std::string::npos) {
    std::vector<long long> v;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) v.push_back(std::stoll(part));
    if (v.size() < 2 || v.size() > 3) throw UsageError("range must be a:b or a:b:step: " + text);
    const long long step = v.size() == 3 ? v[2] : 1;
    if (step <= 0 || v[1] < v[0]) throw UsageError("invalid range: " + text);
    for (long long x = v[0]; x <= v[1]; x += step) out.push_back(static_cast<T>(x));
  } else {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(static_cast<T>(std::stoll(part)));
  }
  if (out.empty()) throw UsageError("empty range: " + text);
  return out;
}

// |X(C)|, counted on the elementary divisor form.
double coset_count(const IntMatrix2& c) {
  if (det(c) == 0) throw DomainError("C must be nonsingular");
  const SmithForm f = smith_form(c);
  std::size_t n = 0;
  for_each_diagonal_coset(f.e1, f.e2, [&](const IntMatrix2&, const IntMatrix2&) { ++n; });
  return static_cast<double>(n);
}

// Arguments in the order CLI11 expects (reversed), with the key=value lines
// of --config FILE appended as options unless given on the command line.
std::vector<std::string> with_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i] == "--config" || args[i].rfind("--config=", 0) == 0) {
      const bool joined = args[i] != "--config";
      if (!joined && i + 1 == args.size()) throw UsageError("--config needs a file");
      path = joined ? args[i].substr(9) : args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + (joined ? 1 : 2)));
      break;
    }
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      auto trim = [](std::string x) {
        const auto a = x.find_first_not_of(" \t\r"), b = x.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : x.substr(a, b - a + 1);
      };
      if (trim(line).empty()) continue;
      if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
      const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
      const std::string flag = "--" + key;
      bool given = false;
      for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
      if (given) continue;
      args.push_back(flag);
      if (value != "true") args.push_back(value);
    }
  }
  std::reverse(args.begin(), args.end());
  return args;
}

struct Output {
  std::string path;
  void emit(const std::string& text) const {
    if (path.empty() || path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    out << text;
  }
  void emit(json j, const std::string& command) const {
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    emit(j.dump(2) + "\n");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric-side laboratory for the degree-2 Petersson formula and spinor moments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; keys are option names without dashes");

  int threads = 0;
  Output output;
  app.add_option("--threads", threads, "worker threads (default: GSP4_THREADS or 1)")->check(CLI::PositiveNumber);
  app.add_option("-o,--output", output.path, "output file (default: stdout)");

  std::function<void()> action;

  // Common kernel policy flags.
  TruncationPolicy policy;
  auto add_policy = [&](CLI::App* sub) {
    sub->add_option("--eps", policy.eps, "target tail bound")->check(CLI::PositiveNumber);
    sub->add_option("--cs-max", policy.rank1_cs_max, "rank-1 cutoff on c s (0: certify)");
    sub->add_option("--norm-max", policy.rank2_norm_max, "rank-2 cutoff on ||C|| (0: certify)");
    sub->add_option("--det-max", policy.rank2_det_max, "rank-2 cutoff on |det C|");
    sub->add_option("--norm-cap", policy.rank2_norm_cap, "largest rank-2 norm cutoff");
    sub->add_option("--det-cap", policy.rank2_det_cap, "largest rank-2 determinant cutoff");
  };

  int k = 10;
  Int N = 1, q = 1, q1 = 1, q2 = 1;

  {
    auto* sub = app.add_subcommand("avg", "weight average kernel(I, I) / 8");
    sub->add_option("--k", k, "weight")->required();
    sub->add_option("--N", N, "level");
    add_policy(sub);
    sub->callback([&] {
      action = [&] {
        const WeightAverage a = avg_weight(k, N, policy);
        output.emit(json{{"inputs", {{"k", k}, {"N", N}}},
                         {"value", a.value},
                         {"tail", a.tail},
                         {"kernel", kernel_json(a.kernel)}},
                    "avg");
      };
    });
  }

  std::string t_text = "1,0,1", q_text = "1,0,1";
  {
    auto* sub = app.add_subcommand("kernel", "normalized Petersson kernel K_k(T, Q)");
    sub->add_option("--k", k, "weight")->required();
    sub->add_option("--T", t_text, "form p1,p2,p4");
    sub->add_option("--Q", q_text, "form p1,p2,p4");
    sub->add_option("--N", N, "level");
    sub->add_flag("--json", "JSON output (default)");
    add_policy(sub);
    sub->callback([&] {
      action = [&] {
        const auto t = HalfIntegralForm::parse(t_text), qf = HalfIntegralForm::parse(q_text);
        output.emit(json{{"inputs", {{"k", k}, {"T", t.str()}, {"Q", qf.str()}, {"N", N}, {"eps", policy.eps}}},
                         {"value", kernel_json(kernel(t, qf, k, N, policy))}},
                    "kernel");
      };
    });
  }

  MomentPolicy mpolicy;
  auto add_moment_policy = [&](CLI::App* sub) {
    sub->add_option("--eps", mpolicy.eps, "relative target for the (n, m) truncation")->check(CLI::PositiveNumber);
    sub->add_option("--kernel-eps", mpolicy.kernel.eps, "target tail of each kernel")->check(CLI::PositiveNumber);
    sub->add_option("--norm-cap", mpolicy.kernel.rank2_norm_cap, "largest rank-2 norm cutoff");
    sub->add_option("--det-cap", mpolicy.kernel.rank2_det_cap, "largest rank-2 determinant cutoff");
  };
  {
    auto* sub = app.add_subcommand("moment1", "first moment, geometric side vs main term");
    sub->add_option("--k", k, "weight")->required();
    sub->add_option("--q", q, "fundamental discriminant or 1");
    sub->add_option("--N", N, "level");
    add_moment_policy(sub);
    sub->callback([&] {
      action = [&] {
        const MomentReport r = first_moment_geometric(k, KroneckerCharacter(q), N, mpolicy);
        output.emit(json{{"inputs", {{"k", k}, {"q", q}, {"N", N}}}, {"report", report_json(r)}}, "moment1");
      };
    });
  }
  {
    auto* sub = app.add_subcommand("moment2", "second moment, geometric side vs main term");
    sub->add_option("--k", k, "weight")->required();
    sub->add_option("--q1", q1, "fundamental discriminant or 1");
    sub->add_option("--q2", q2, "fundamental discriminant or 1");
    sub->add_flag("--diagonal-only", mpolicy.diagonal_only, "keep only the diagonal kernel terms");
    sub->add_option("--max-kernels", mpolicy.max_kernels, "budget of off-diagonal kernels");
    add_moment_policy(sub);
    sub->callback([&] {
      action = [&] {
        const MomentReport r =
            second_moment_geometric(k, KroneckerCharacter(q1), KroneckerCharacter(q2), 1, mpolicy);
        output.emit(json{{"inputs", {{"k", k}, {"q1", q1}, {"q2", q2}}}, {"report", report_json(r)}}, "moment2");
      };
    });
  }
  {
    auto* sub = app.add_subcommand("mainterm1", "first-moment main term");
    sub->add_option("--k", k, "weight")->required();
    sub->add_option("--q", q, "fundamental discriminant or 1");
    sub->add_option("--N", N, "level");
    sub->callback([&] {
      action = [&] {
        json j{{"inputs", {{"k", k}, {"q", q}, {"N", N}}},
               {"residue", first_moment_residue(k, KroneckerCharacter(q), N)}};
        if (q == 1 && N == 1) {
          const FirstMomentMain m = first_moment_main(k);
          j["digamma_form"] = m.digamma_form;
          j["log_form"] = m.log_form;
        }
        output.emit(j, "mainterm1");
      };
    });
  }
  {
    auto* sub = app.add_subcommand("mainterm2", "second-moment main term");
    sub->add_option("--k", k, "weight")->required();
    sub->add_option("--q1", q1, "fundamental discriminant or 1");
    sub->add_option("--q2", q2, "fundamental discriminant or 1");
    sub->callback([&] {
      action = [&] {
        const SecondMomentMain m = second_moment_main({k, KroneckerCharacter(q1), KroneckerCharacter(q2), 1});
        output.emit(json{{"inputs", {{"k", k}, {"q1", q1}, {"q2", q2}}},
                         {"value", m.value},
                         {"value_halved_radii", m.value_halved},
                         {"log_form", m.log_form},
                         {"log_coefficients", m.log_coefficients}},
                    "mainterm2");
      };
    });
  }
  {
    auto* sub = app.add_subcommand("mainterm-level", "level-aspect main term 2 L(1) log N + C(k)");
    sub->add_option("--k", k, "weight")->required();
    sub->add_option("--N", N, "prime level, 3 mod 4")->required();
    sub->callback([&] {
      action = [&] {
        output.emit(json{{"inputs", {{"k", k}, {"N", N}}},
                         {"value", level_main(k, N)},
                         {"constant", level_constant(k)}},
                    "mainterm-level");
      };
    });
  }

  std::string sweep_op, k_range = "10", n_range = "1";
  {
    auto* sub = app.add_subcommand("sweep", "grid of moment reports as CSV");
    sub->add_option("op", sweep_op, "moment1 | moment2 | avg")->required()->check(
        CLI::IsMember({"moment1", "moment2", "avg"}));
    sub->add_option("--k", k_range, "weights a:b[:step] or list");
    sub->add_option("--N", n_range, "levels a:b[:step] or list");
    sub->add_option("--q1", q1, "fundamental discriminant or 1");
    sub->add_option("--q2", q2, "fundamental discriminant or 1");
    sub->add_option("--csv", output.path, "CSV file (default: stdout)");
    add_moment_policy(sub);
    sub->callback([&] {
      action = [&] {
        const auto rows = sweep(sweep_op, parse_range<int>(k_range), parse_range<Int>(n_range),
                                KroneckerCharacter(q1), KroneckerCharacter(q2), mpolicy);
        std::ostringstream s;
        write_sweep_csv(s, rows);
        output.emit(s.str());
      };
    });
  }

  {
    auto* sub = app.add_subcommand("expsum", "exponential sums");
    sub->require_subcommand(1);
    std::string c_text = "1,0,0,1";
    auto* kl = sub->add_subcommand("kloosterman", "K(Q, T; C)");
    kl->add_option("--Q", q_text, "form p1,p2,p4");
    kl->add_option("--T", t_text, "form p1,p2,p4");
    kl->add_option("--C", c_text, "matrix a,b,c,d");
    kl->callback([&] {
      action = [&] {
        const auto qf = HalfIntegralForm::parse(q_text), t = HalfIntegralForm::parse(t_text);
        const IntMatrix2 c = parse_matrix(c_text);
        const double trivial = coset_count(c);
        output.emit(json{{"inputs", {{"Q", qf.str()}, {"T", t.str()}, {"C", format_matrix(c)}}},
                         {"value", complex_json(kloosterman_K(qf, t, c))},
                         {"trivial_bound", trivial}},
                    "expsum kloosterman");
      };
    });
    static int sign = 1;
    static Int modulus = 1;
    static std::string p_text = "1,0,1", s_text = "1,0,1";
    auto* sa = sub->add_subcommand("salie", "H(P, S; c)");
    sa->add_option("--sign", sign, "+1 or -1")->check(CLI::IsMember({1, -1}));
    sa->add_option("--P", p_text, "form p1,p2,p4");
    sa->add_option("--S", s_text, "form p1,p2,p4");
    sa->add_option("--c", modulus, "modulus")->required();
    sa->callback([&] {
      action = [&] {
        const auto p = HalfIntegralForm::parse(p_text), s = HalfIntegralForm::parse(s_text);
        output.emit(json{{"inputs", {{"sign", sign}, {"P", p.str()}, {"S", s.str()}, {"c", modulus}}},
                         {"value", complex_json(salie_H(sign, p, s, modulus))},
                         {"trivial_bound", double(modulus) * double(modulus)}},
                    "expsum salie");
      };
    });
    static Int x = 1, y = 0;
    static bool reflection = false, check = false;
    auto* cu = sub->add_subcommand("curly", "the GO2 sum and its closed form");
    cu->add_option("--x", x, "x of (x, y; -y, x)")->required();
    cu->add_option("--y", y, "y")->required();
    cu->add_option("--reflect", reflection, "true: use (x, y; y, -x)");
    cu->add_option("--q1", q1, "fundamental discriminant or 1");
    cu->add_option("--q2", q2, "fundamental discriminant or 1");
    cu->add_flag("--check", check, "compare the direct sum with the closed form");
    cu->callback([&] {
      action = [&] {
        const GOElement g(x, y, reflection);
        const KroneckerCharacter c1(q1), c2(q2);
        const Complex direct = curly_K(g, c1, c2);
        const double det = double(g.abs_det());
        json j{{"inputs", {{"x", x}, {"y", y}, {"reflect", reflection}, {"q1", q1}, {"q2", q2}}},
               {"value", complex_json(direct)},
               {"trivial_bound", double(enumerate_XC(g.matrix()).size()) *
                                     double(lcm(c1.modulus(), g.abs_det())) *
                                     double(lcm(c2.modulus(), g.abs_det()))}};
        if (check) {
          const Complex closed = curly_K_closed(g, c1, c2);
          const bool pass = std::abs(direct - closed) <= 1e-8 * det * det;
          j["closed_form"] = complex_json(closed);
          j["check"] = pass ? "pass" : "fail";
          output.emit(j, "expsum curly");
          if (!pass) throw DomainError("closed form mismatch");
          return;
        }
        output.emit(j, "expsum curly");
      };
    });
  }

  int two_nu = 17;
  double xval = 1.0;
  {
    auto* sub = app.add_subcommand("bessel", "J_nu(x) for integer or half-odd-integer nu");
    sub->add_option("--two-nu", two_nu, "twice the order")->required()->check(CLI::NonNegativeNumber);
    sub->add_option("--x", xval, "argument")->required()->check(CLI::NonNegativeNumber);
    sub->callback([&] {
      action = [&] {
        const BesselOrder order(two_nu);
        output.emit(json{{"inputs", {{"two_nu", two_nu}, {"x", xval}}},
                         {"value", besselJ(order, xval)},
                         {"tail_bound", besselJ_tail_bound(order, xval)},
                         {"majorant", besselJ_majorant(order, xval)}},
                    "bessel");
      };
    });
  }
  {
    auto* sub = app.add_subcommand("weight-w", "the weight function W(x)");
    sub->add_option("--k", k, "weight")->required();
    sub->add_option("--x", xval, "argument")->required()->check(CLI::PositiveNumber);
    sub->callback([&] {
      action = [&] {
        const WeightKernel wk(k);
        const auto v = wk.evaluate(xval);
        output.emit(json{{"inputs", {{"k", k}, {"x", xval}}},
                         {"value", v.value},
                         {"imag_residual", v.imag},
                         {"tail_bound", v.truncation}},
                    "weight-w");
      };
    });
  }
  {
    static std::string c_text = "1,0,0,1";
    static Int h1 = 0, h2 = 0, n1 = 1, n2 = 1;
    auto* sub = app.add_subcommand("psi", "the oscillatory integral Psi(C; h1, h2)");
    sub->add_option("--k", k, "weight")->required();
    sub->add_option("--C", c_text, "matrix a,b,c,d");
    sub->add_option("--h1", h1, "frequency");
    sub->add_option("--h2", h2, "frequency");
    sub->add_option("--n1", n1, "n1");
    sub->add_option("--n2", n2, "n2");
    sub->add_option("--q1", q1, "fundamental discriminant or 1");
    sub->add_option("--q2", q2, "fundamental discriminant or 1");
    sub->callback([&] {
      action = [&] {
        const IntMatrix2 c = parse_matrix(c_text);
        const PsiValue v = eval_Psi(c, h1, h2, n1, n2, KroneckerCharacter(q1), KroneckerCharacter(q2), k);
        output.emit(json{{"inputs",
                          {{"k", k}, {"C", format_matrix(c)}, {"h1", h1}, {"h2", h2}, {"n1", n1}, {"n2", n2},
                           {"q1", q1}, {"q2", q2}}},
                         {"value", complex_json(v.value)},
                         {"abs", std::abs(v.value)},
                         {"error", v.error},
                         {"cutoffs", {v.cutoff1, v.cutoff2}}},
                    "psi");
      };
    });
  }
  {
    static std::string table_path;
    static double floor = 1e-3;
    auto* sub = app.add_subcommand("ratio-check", "kernel cross-ratios against a coefficient table");
    sub->add_option("--table", table_path, "table file")->required();
    sub->add_option("--floor", floor, "tolerance floor");
    add_policy(sub);
    sub->callback([&] {
      action = [&] {
        const FormTable table = load_table(table_path);
        const RatioReport rep = ratio_check(table, policy, 1, floor);
        json rows = json::array();
        for (const auto& r : rep.rows)
          rows.push_back({{"T_i", table.entries[r.i].form.str()},
                          {"T_j", table.entries[r.j].form.str()},
                          {"kernel_ratio", r.kernel_ratio},
                          {"coefficient_ratio", r.coefficient_ratio},
                          {"discrepancy", r.discrepancy},
                          {"tolerance", r.tolerance},
                          {"pass", r.pass}});
        output.emit(json{{"inputs", {{"table", table_path}, {"weight", table.weight}, {"eps", policy.eps}}},
                         {"provenance", table.provenance},
                         {"reference", table.entries[rep.reference].form.str()},
                         {"rows", rows},
                         {"max_discrepancy", rep.max_discrepancy},
                         {"pass", rep.pass}},
                    "ratio-check");
        if (!rep.pass) throw DomainError("ratio check failed");
      };
    });
  }

  std::vector<std::string> args;
  try {
    args = with_config(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (threads > 0) set_worker_count(threads);
    if (action) action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
