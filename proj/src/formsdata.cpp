#include "gsp4/formsdata.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace gsp4 {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw TableError("line " + std::to_string(line) + ": " + msg);
}

Int parse_int(std::string_view s, int line, const char* what) {
  s = trim(s);
  if (s.empty()) fail(line, std::string("missing ") + what);
  std::size_t pos = 0;
  Int v = 0;
  try {
    v = std::stoll(std::string(s), &pos);
  } catch (const std::exception&) {
    fail(line, std::string("invalid ") + what + " '" + std::string(s) + "'");
  }
  if (pos != s.size()) fail(line, std::string("invalid ") + what + " '" + std::string(s) + "'");
  return v;
}

FormEntry parse_entry(std::string_view rest, int line) {
  // p1,p2,p4 numerator[/denominator]
  rest = trim(rest);
  const auto space = rest.find_first_of(" \t");
  if (space == std::string_view::npos) fail(line, "entry needs a form and a coefficient");
  const std::string_view form_text = rest.substr(0, space);
  const std::string_view coef = trim(rest.substr(space));
  FormEntry e;
  e.line = line;
  try {
    e.form = HalfIntegralForm::parse(form_text);
  } catch (const std::exception& ex) {
    fail(line, "invalid form '" + std::string(form_text) + "': " + ex.what());
  }
  const auto slash = coef.find('/');
  e.numerator = parse_int(coef.substr(0, slash), line, "numerator");
  if (slash != std::string_view::npos) e.denominator = parse_int(coef.substr(slash + 1), line, "denominator");
  if (e.denominator <= 0) fail(line, "denominator must be positive");
  return e;
}

}  // namespace

FormTable parse_table(std::string_view text) {
  FormTable t;
  bool have_weight = false, have_provenance = false;
  std::map<HalfIntegralForm, int> seen;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto space = line.find_first_of(" \t");
    const std::string_view key = line.substr(0, space);
    const std::string_view rest = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
    if (key == "weight") {
      if (have_weight) fail(line_no, "duplicate weight");
      const Int k = parse_int(rest, line_no, "weight");
      if (k < 6 || k % 2 != 0) fail(line_no, "weight must be even and at least 6");
      t.weight = static_cast<int>(k);
      have_weight = true;
    } else if (key == "provenance") {
      if (have_provenance) fail(line_no, "duplicate provenance");
      if (rest.empty()) fail(line_no, "provenance must not be empty");
      t.provenance = std::string(rest);
      have_provenance = true;
    } else if (key == "entry") {
      FormEntry e = parse_entry(rest, line_no);
      if (!is_reduced(e.form))
        fail(line_no, "form " + e.form.str() + " is not reduced; use " + reduce(e.form).form.str());
      if (auto [it, fresh] = seen.emplace(e.form, line_no); !fresh)
        fail(line_no, "duplicate form " + e.form.str() + " (first on line " + std::to_string(it->second) + ")");
      t.entries.push_back(e);
    } else {
      fail(line_no, "unknown key '" + std::string(key) + "'");
    }
    if (end == text.size()) break;
  }
  if (!have_weight) throw TableError("missing weight");
  if (!have_provenance) throw TableError("missing provenance");
  if (t.entries.empty()) throw TableError("no entries");
  return t;
}

FormTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return parse_table(s.str());
}

double normalized_coefficient(const FormEntry& e, int k) {
  return e.value() * std::pow(e.form.det(), -(0.5 * k - 0.75));
}

RatioReport ratio_check(const FormTable& table, const KernelFunction& kernel_fn, double floor) {
  RatioReport rep;
  const auto n = table.entries.size();
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = normalized_coefficient(table.entries[i], table.weight);
    if (std::abs(a[i]) > std::abs(a[rep.reference])) rep.reference = i;
  }
  const std::size_t r = rep.reference;
  if (a[r] == 0.0) throw DomainError("ratio_check: all coefficients vanish");
  const HalfIntegralForm& tr = table.entries[r].form;
  const KernelEntry ref = kernel_fn(tr, tr);
  if (!(std::abs(ref.value) > ref.tail)) throw DomainError("ratio_check: reference kernel value is not resolved");
  rep.pass = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      RatioRow row;
      row.i = i;
      row.j = j;
      const KernelEntry kij = (i == r && j == r) ? ref : kernel_fn(table.entries[i].form, table.entries[j].form);
      row.kernel_ratio = kij.value / ref.value;
      row.coefficient_ratio = a[i] * a[j] / (a[r] * a[r]);
      row.discrepancy = std::abs(row.kernel_ratio - row.coefficient_ratio);
      const double denom = std::abs(ref.value) - ref.tail;
      row.tolerance = floor + (kij.tail + std::abs(row.kernel_ratio) * ref.tail) / denom;
      row.pass = row.discrepancy <= row.tolerance;
      rep.pass = rep.pass && row.pass;
      rep.max_discrepancy = std::max(rep.max_discrepancy, row.discrepancy);
      rep.rows.push_back(row);
    }
  return rep;
}

RatioReport ratio_check(const FormTable& table, const TruncationPolicy& policy, Int N, double floor) {
  return ratio_check(
      table,
      [&](const HalfIntegralForm& t, const HalfIntegralForm& q) {
        const KernelValue v = kernel(t, q, table.weight, N, policy);
        return KernelEntry{v.total, v.tail_bound};
      },
      floor);
}

}  // namespace gsp4
