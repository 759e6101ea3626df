#include "calderon/numkit/extended.hpp"

#include <cmath>
#include <sstream>

namespace calderon::numkit {

int precision_bucket(int bits) {
  if (bits < 53) throw ParameterError("precision below double (53 bits) is not supported");
  if (bits == 53) return 53;
  if (bits <= 128) return 128;
  if (bits <= 192) return 192;
  if (bits <= kWideBits) return kWideBits;
  throw ParameterError("precision_bits above " + std::to_string(kWideBits) + " is not supported");
}

int decimal_digits(int bits) {
  return static_cast<int>(std::floor(bits * std::log10(2.0)));
}

std::string to_decimal_string(const Wide& x) {
  return x.str(decimal_digits(kWideBits) + 2, std::ios_base::scientific);
}

Wide wide_from_string(const std::string& text) {
  try {
    return Wide(text);
  } catch (const std::exception&) {
    throw ParameterError("not a decimal number: '" + text + "'");
  }
}

}  // namespace calderon::numkit
