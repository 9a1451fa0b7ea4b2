#include <cmath>

#include <fmt/format.h>

#include "kk/cli.hpp"

namespace kk::cli {

namespace {

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

// Lines on which each top-level array element begins.
std::vector<int> element_lines(const std::string& text) {
  std::vector<int> lines;
  int depth = 0;
  int line = 1;
  bool in_string = false;
  bool escaped = false;
  bool expect_element = false;
  for (char c : text) {
    if (c == '\n') ++line;
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    if (depth == 1 && expect_element && c != ']') {
      lines.push_back(line);
      expect_element = false;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[' || c == '{') {
      ++depth;
      if (depth == 1) expect_element = true;
    } else if (c == ']' || c == '}') {
      --depth;
    } else if (c == ',' && depth == 1) {
      expect_element = true;
    }
  }
  return lines;
}

std::string decimal_field(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw Error(ErrorKind::kParse, fmt::format("{}: missing field '{}'", where, key));
  const auto& v = obj.at(key);
  if (!v.is_string())
    throw Error(ErrorKind::kParse, fmt::format("{}: field '{}' must be a decimal string", where, key));
  const auto s = v.get<std::string>();
  parse_decimal(s);  // validates
  return s;
}

std::string input(const GoldenVector& v, const char* key) {
  if (!v.inputs.contains(key))
    throw Error(ErrorKind::kParse, fmt::format("line {}: {} needs input '{}'", v.line, v.function, key));
  return v.inputs.at(key).get<std::string>();
}

double input_real(const GoldenVector& v, const char* key) { return parse_decimal(input(v, key)); }

KKParams input_params(const GoldenVector& v) {
  KKParams p;
  p.a = input_real(v, "a");
  p.b = input_real(v, "b");
  p.alpha = input_real(v, "alpha");
  p.beta = input_real(v, "beta");
  p.zeta = v.inputs.contains("zeta") ? input_real(v, "zeta") : 0.0;
  return p;
}

CoeffFn input_kappa(const GoldenVector& v) {
  CoeffFn k = parse_coeff_family(input(v, "kappa"));
  return v.inputs.contains("kappa0") ? k.with_kappa0(input_real(v, "kappa0")) : k;
}

}  // namespace

std::vector<GoldenVector> parse_goldens(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse, fmt::format("line {}: malformed JSON ({})", line_of(text, e.byte), e.what()));
  }
  if (!doc.is_array()) throw Error(ErrorKind::kParse, "line 1: golden file must be a JSON array");

  const auto lines = element_lines(text);
  std::vector<GoldenVector> out;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const auto& obj = doc[k];
    GoldenVector v;
    v.line = k < lines.size() ? lines[k] : 0;
    const std::string where = fmt::format("line {}: vector {}", v.line, k);
    if (!obj.is_object()) throw Error(ErrorKind::kParse, where + ": expected an object");
    if (!obj.contains("function") || !obj.at("function").is_string())
      throw Error(ErrorKind::kParse, where + ": missing string field 'function'");
    v.function = obj.at("function").get<std::string>();
    if (!obj.contains("inputs") || !obj.at("inputs").is_object())
      throw Error(ErrorKind::kParse, where + ": missing object field 'inputs'");
    v.inputs = obj.at("inputs");
    for (const auto& [name, val] : v.inputs.items())
      if (!val.is_string())
        throw Error(ErrorKind::kParse, fmt::format("{}: input '{}' must be a decimal string", where, name));
    v.value_re = decimal_field(obj, "value_re", where);
    v.value_im = decimal_field(obj, "value_im", where);
    v.tol = decimal_field(obj, "tol", where);
    if (!obj.contains("digits") || !obj.at("digits").is_number_integer())
      throw Error(ErrorKind::kParse, where + ": missing integer field 'digits'");
    v.digits = obj.at("digits").get<int>();
    out.push_back(std::move(v));
  }
  return out;
}

Cx evaluate_golden(const GoldenVector& v) {
  const std::string& f = v.function;
  if (f == "ln_gamma") return ln_gamma(input_real(v, "x"));
  if (f == "digamma") return digamma(input_real(v, "x"));
  if (f == "beta") return beta(input_real(v, "p"), input_real(v, "q"));
  if (f == "pochhammer")
    return pochhammer(input_real(v, "a"), static_cast<std::int64_t>(input_real(v, "n")));

  if (f == "kummer_m" || f == "dM_da" || f == "dM_db") {
    const double a = input_real(v, "a");
    const double b = input_real(v, "b");
    const Cx z = parse_complex(input(v, "z"));
    if (f == "kummer_m") return kummer_m(a, b, z).value;
    if (f == "dM_da") return dM_da(a, b, z).value;
    return dM_db(a, b, z).value;
  }

  if (f == "kk_direct" || f == "case_c_reference" || f == "case_d_reference")
    return kk_direct(input_params(v), input_kappa(v), parse_complex(input(v, "z"))).value;
  if (f == "dirichlet_direct")
    return dirichlet_direct(input_params(v), input_kappa(v), parse_complex(input(v, "z")),
                            input_real(v, "t"))
        .value;
  if (f == "counting_sum")
    return counting_sum(input_params(v), input_kappa(v), input_real(v, "s")).value;

  throw Error(ErrorKind::kParse, fmt::format("line {}: unknown function '{}'", v.line, f));
}

}  // namespace kk::cli
