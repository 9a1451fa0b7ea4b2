#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "kk/master.hpp"

namespace kk::cli {

// "<re>", "<im>i", "<re>+<im>i" or "<re>-<im>i"; locale independent.
Cx parse_complex(std::string_view text);
double parse_decimal(std::string_view text);

// Fixed 17-significant-digit rendering used for every printed value.
std::string format_value(double v);

enum class Route {
  kMSeries,
  kMIntegral,
  kDirect,
  kDirichlet,
  kCahen,
  kMaster,
  kCaseA,
  kCaseB,
  kCaseC,
  kCaseD,
  kBound,
};

std::optional<Route> route_from_name(std::string_view name);
const char* route_name(Route r);

struct PointConfig {
  KKParams params;
  std::string kappa_spec = "zero";
  std::optional<double> kappa0;
  Cx z;
  QuadSpec quad;

  CoeffFn coeffs() const;
};

EvalReport evaluate_route(Route route, const PointConfig& cfg);

// One golden vector: inputs are kept as the decimal strings read from disk.
struct GoldenVector {
  std::string function;
  nlohmann::json inputs;
  std::string value_re;
  std::string value_im;
  int digits = 0;
  std::string tol;
  int line = 0;  // line of the opening brace in the source file
};

// Throws kParse with a line-qualified message on malformed input.
std::vector<GoldenVector> parse_goldens(const std::string& text);
Cx evaluate_golden(const GoldenVector& v);

// Entry point shared by the executable and the tests. args excludes argv[0].
// Exit status: 0 clean, 2 result carries diagnostic flags, 1 error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kk::cli
