#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace thzdoa {

// Half-power characteristics of unit-energy pulses, n = 1..6 and f_c = 2..6 THz, in ps / THz.
struct HalfPowerRow {
  int order = 0;
  double fc_thz = 0.0;
  double tp_ps = 0.0;
  double fl_thz = 0.0;
  double fh_thz = 0.0;
  double b3db_thz = 0.0;  // always fh - fl
  std::string flag;       // non-empty where the published cell disagrees with the closed form
};

struct PublishedCell {
  double tp_ps;
  double fl_thz;
  double fh_thz;
  double b3db_thz;
};

std::optional<PublishedCell> published_half_power_cell(int order, int fc_thz);

std::vector<HalfPowerRow> half_power_table();

// `n,fc_thz,tp_ps,fl_thz,fh_thz,b3db_thz,flag`
void write_half_power_csv(const std::vector<HalfPowerRow>& rows, std::ostream& out);

}  // namespace thzdoa
