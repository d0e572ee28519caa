#pragma once

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>

#include <json.hpp>

#include "revival/packet.hpp"

namespace revival {

// All floating-point output carries 15 significant digits.
inline std::string format_g15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline double round15(double v) { return std::strtod(format_g15(v).c_str(), nullptr); }

inline void write_series_csv(const AutocorrelationSeries& s, std::ostream& os) {
  os << "t,re_A,im_A,abs2\n";
  for (std::size_t i = 0; i < s.times.size(); ++i)
    os << format_g15(s.times[i]) << ',' << format_g15(s.values[i].real()) << ','
       << format_g15(s.values[i].imag()) << ',' << format_g15(s.abs2[i]) << '\n';
}

inline nlohmann::json series_to_json(const AutocorrelationSeries& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < s.times.size(); ++i)
    rows.push_back({{"t", round15(s.times[i])},
                    {"re_A", round15(s.values[i].real())},
                    {"im_A", round15(s.values[i].imag())},
                    {"abs2", round15(s.abs2[i])}});
  return rows;
}

}  // namespace revival
