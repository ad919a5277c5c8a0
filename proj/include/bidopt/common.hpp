#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace bidopt {

/// Market indices within a delivery hour: 0 = hourly day-ahead auction,
/// 1..4 = the four quarter-hourly intraday auctions.
inline constexpr int kNumMarkets = 5;
inline constexpr int kNumQuarters = 4;

/// Prices or per-market quantities for the five auctions of one hour.
using Vec5 = std::array<double, 5>;
/// Per-quarter-hour quantities (portfolio volumes, imbalance prices).
using Vec4 = std::array<double, 4>;

enum class Side { Supply, Demand };

inline const char* to_string(Side s) { return s == Side::Supply ? "S" : "D"; }

/// Base class for all input/contract violations. CLI maps these to exit 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

#define BIDOPT_ERROR(Name)                                              \
  class Name : public ValidationError {                                 \
   public:                                                              \
    explicit Name(const std::string& what) : ValidationError(what) {}   \
  }

BIDOPT_ERROR(EmptyLadder);
BIDOPT_ERROR(OffGridPrice);
BIDOPT_ERROR(VolumeOutOfRange);
BIDOPT_ERROR(IncompatibleGrids);
BIDOPT_ERROR(InsufficientHistory);
BIDOPT_ERROR(NonMonotoneExcess);
BIDOPT_ERROR(DegenerateSlope);
BIDOPT_ERROR(MissingHistory);
BIDOPT_ERROR(WindowTooShort);
BIDOPT_ERROR(LayoutMismatch);
BIDOPT_ERROR(EmptyResiduals);
BIDOPT_ERROR(EmptyGains);
BIDOPT_ERROR(SingularS2);
BIDOPT_ERROR(SchemaError);
BIDOPT_ERROR(DuplicateRow);
BIDOPT_ERROR(GapError);
BIDOPT_ERROR(DataGap);
BIDOPT_ERROR(MissingCurves);
BIDOPT_ERROR(AlignmentError);
BIDOPT_ERROR(LengthMismatch);
BIDOPT_ERROR(ConfigError);

#undef BIDOPT_ERROR

}  // namespace bidopt
