#include "thzdoa/table1.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "thzdoa/constants.hpp"
#include "thzdoa/spectrum.hpp"

namespace thzdoa {

namespace {

// Rows f_c = 2..6 THz; per row, six (T_p, f_l, f_h, B_3dB) groups for n = 1..6, as printed.
constexpr double kPublished[5][24] = {
    {0.79, 0.96, 3.27, 3.27, 1.12, 1.23, 2.88, 1.64, 1.37, 1.36, 2.71, 1.35,
     1.59, 1.44, 2.61, 1.71, 1.77, 1.49, 2.54, 1.04, 1.94, 1.54, 2.49, 0.95},
    {0.53, 1.44, 4.90, 3.46, 0.75, 1.85, 4.32, 2.47, 0.91, 2.04, 4.07, 2.02,
     1.06, 2.16, 3.92, 1.75, 1.18, 2.24, 3.82, 1.57, 1.29, 2.31, 3.74, 1.43},
    {0.39, 1.92, 6.54, 4.61, 0.56, 2.46, 5.76, 3.29, 0.68, 2.72, 5.42, 2.70,
     0.79, 2.88, 5.22, 2.34, 0.88, 2.99, 5.09, 2.09, 0.97, 3.08, 4.99, 1.91},
    {0.31, 2.40, 8.18, 5.77, 0.45, 3.08, 7.20, 4.12, 0.55, 3.40, 6.78, 3.37,
     0.63, 3.60, 6.53, 2.92, 0.71, 3.74, 6.36, 2.62, 0.77, 3.85, 6.24, 2.39},
    {0.26, 2.88, 9.81, 6.92, 0.37, 3.70, 8.64, 4.94, 0.45, 4.09, 8.14, 4.05,
     0.53, 4.32, 7.84, 3.51, 0.50, 4.49, 7.64, 3.14, 0.64, 4.62, 7.49, 2.87},
};

std::string cell_flag(const HalfPowerRow& row, const PublishedCell& printed) {
  std::string flag;
  const auto add = [&](const char* what) {
    if (!flag.empty()) flag += ';';
    flag += what;
  };
  if (std::abs(row.tp_ps - printed.tp_ps) > 0.01) add("published_tp_inconsistent");
  if (std::abs(printed.b3db_thz - (printed.fh_thz - printed.fl_thz)) > 0.015) add("published_b3db_not_fh_minus_fl");
  return flag;
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::optional<PublishedCell> published_half_power_cell(int order, int fc_thz) {
  if (order < 1 || order > 6 || fc_thz < 2 || fc_thz > 6) return std::nullopt;
  const double* c = &kPublished[fc_thz - 2][4 * (order - 1)];
  return PublishedCell{c[0], c[1], c[2], c[3]};
}

std::vector<HalfPowerRow> half_power_table() {
  std::vector<HalfPowerRow> rows;
  for (int n = 1; n <= 6; ++n) {
    for (int fc = 2; fc <= 6; ++fc) {
      const PulseSpec spec = pulse_spec(n, fc * kTera, kAtto);
      const HalfPowerBand band = half_power_band(spec);
      HalfPowerRow row;
      row.order = n;
      row.fc_thz = fc;
      row.tp_ps = spec.duration_s / kPico;
      row.fl_thz = band.low_hz / kTera;
      row.fh_thz = band.high_hz / kTera;
      row.b3db_thz = band.bandwidth_hz / kTera;
      row.flag = cell_flag(row, *published_half_power_cell(n, fc));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_half_power_csv(const std::vector<HalfPowerRow>& rows, std::ostream& out) {
  out << "n,fc_thz,tp_ps,fl_thz,fh_thz,b3db_thz,flag\n";
  for (const auto& r : rows) {
    out << r.order << ',' << fixed(r.fc_thz, 0) << ',' << fixed(r.tp_ps, 4) << ',' << fixed(r.fl_thz, 4) << ','
        << fixed(r.fh_thz, 4) << ',' << fixed(r.b3db_thz, 4) << ',' << r.flag << '\n';
  }
}

}  // namespace thzdoa
