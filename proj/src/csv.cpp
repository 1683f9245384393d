/*
 * Copyright 2026 spine-mech authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "spinemech/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <string>

#include "spinemech/errors.hpp"
#include "spinemech/version.hpp"

namespace spinemech {

namespace {

// Trims ASCII spaces and tabs from both ends.
std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

bool parse_field(const std::string& field, double* out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  const char* begin = t.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + t.size()) return false;
  *out = v;
  return true;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string provenance_line(const std::string& command,
                            const std::string& config_hash) {
  std::string line = "# ";
  line += kToolName;
  line += ' ';
  line += kVersion;
  line += ' ';
  line += command;
  line += ' ';
  line += config_hash;
  return line;
}

std::string tum_curve_csv(const TumSpec& spec, const std::vector<double>& thetas,
                          const std::string& provenance) {
  std::string out = provenance + "\n";
  out +=
      "theta_rad,contraction_mm,jacobian_mm_per_rad,Fs_single_N,Fs_total_N,"
      "tau_s_Nmm\n";
  for (const double theta : thetas) {
    out += format_double(theta);
    out += ',';
    out += format_double(contraction(spec, theta));
    out += ',';
    out += format_double(jacobian(spec, theta));
    out += ',';
    out += format_double(strip_axial_force(spec, theta));
    out += ',';
    out += format_double(total_elastic_force(spec, theta));
    out += ',';
    out += format_double(elastic_torque(spec, theta));
    out += '\n';
  }
  return out;
}

std::string linkage_curve_csv(const LinkageSpec& spec,
                              const std::vector<double>& contractions,
                              const std::string& provenance) {
  std::string out = provenance + "\n";
  out += "X_mm,theta1_rad,theta2_rad,Jg_rad_per_mm\n";
  bool have_prev = false;
  LinkageState prev;
  for (const double X : contractions) {
    // Warm starts keep the sampled branch continuous across the curve.
    const LinkageState st =
        have_prev ? solve_configuration(spec, X, prev.theta1, prev.theta2)
                  : solve_configuration(spec, X);
    prev = st;
    have_prev = true;
    out += format_double(X);
    out += ',';
    out += format_double(st.theta1);
    out += ',';
    out += format_double(st.theta2);
    out += ',';
    out += format_double(finger_jacobian(spec, st));
    out += '\n';
  }
  return out;
}

std::string trace_csv(const SimTrace& trace, const std::string& provenance) {
  std::string out = provenance + "\n";
  out +=
      "t_s,theta_input_rad,theta_twist_rad,theta_body_rad,X_mm,theta2_rad,"
      "tau_transmitted_Nmm,grasp_torque_Nmm,phase\n";
  for (const SimState& s : trace.states) {
    out += format_double(s.t);
    out += ',';
    out += format_double(s.theta_input);
    out += ',';
    out += format_double(s.theta_twist);
    out += ',';
    out += format_double(s.theta_body);
    out += ',';
    out += format_double(s.X);
    out += ',';
    out += format_double(s.theta2);
    out += ',';
    out += format_double(s.tau_transmitted);
    out += ',';
    out += format_double(s.grasp_torque);
    out += ',';
    out += phase_code(s.phase);
    out += '\n';
  }
  return out;
}

std::string reports_csv(const std::vector<DesignReport>& reports,
                        const std::string& provenance) {
  std::string out = provenance + "\n";
  out +=
      "candidate_index,radius_R,strip_length_L,n_strips,strip_width_w1,"
      "top_plate_thickness_w2,bottom_plate_thickness_w3,link_R1,link_R2,"
      "offset_a,offset_b,offset_c,status,constraint_pass,margin_mm,stroke_mm,"
      "finger_range_deg,required_holding_torque_Nmm,grasp_torque_Nmm\n";
  for (const DesignReport& r : reports) {
    out += std::to_string(r.candidate_index);
    out += ',';
    out += format_double(r.radius_R);
    out += ',';
    out += format_double(r.strip_length_L);
    out += ',';
    out += std::to_string(r.n_strips);
    out += ',';
    out += format_double(r.strip_width_w1);
    out += ',';
    out += format_double(r.top_plate_thickness_w2);
    out += ',';
    out += format_double(r.bottom_plate_thickness_w3);
    out += ',';
    out += format_double(r.link_R1);
    out += ',';
    out += format_double(r.link_R2);
    out += ',';
    out += format_double(r.offset_a);
    out += ',';
    out += format_double(r.offset_b);
    out += ',';
    out += format_double(r.offset_c);
    out += ',';
    out += to_string(r.status);
    out += ',';
    out += r.constraint_pass ? '1' : '0';
    out += ',';
    out += format_double(r.margin_mm);
    out += ',';
    out += format_double(r.stroke_mm);
    out += ',';
    out += format_double(r.finger_range_deg);
    out += ',';
    out += format_double(r.required_holding_torque_Nmm);
    out += ',';
    out += format_double(r.grasp_torque_Nmm);
    out += '\n';
  }
  return out;
}

std::string analysis_csv(const std::vector<JacobianSample>& samples,
                         const TumSpec& spec, double fitted_offset,
                         const std::string& provenance) {
  std::string out = provenance + "\n";
  out += "# fitted_offset_Nmm ";
  out += format_double(fitted_offset);
  out += '\n';
  out += "theta_rad,J_exp_mm_per_rad,J_model_mm_per_rad,rel_err\n";
  for (const JacobianSample& s : samples) {
    const double j_model = jacobian(spec, s.theta);
    const double rel =
        j_model != 0.0 ? (s.jacobian - j_model) / j_model
                       : std::numeric_limits<double>::quiet_NaN();
    out += format_double(s.theta);
    out += ',';
    out += format_double(s.jacobian);
    out += ',';
    out += format_double(j_model);
    out += ',';
    out += format_double(rel);
    out += '\n';
  }
  return out;
}

std::vector<LogSample> read_torque_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file '" + path + "'");
  std::vector<LogSample> rows;
  std::string line;
  long line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') continue;

    const std::size_t comma = t.find(',');
    LogSample sample;
    bool ok = comma != std::string::npos &&
              t.find(',', comma + 1) == std::string::npos &&
              parse_field(t.substr(0, comma), &sample.theta) &&
              parse_field(t.substr(comma + 1), &sample.tau_in);
    if (!ok) {
      if (header_allowed) {
        // A single leading non-numeric line is treated as a column header.
        header_allowed = false;
        continue;
      }
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": malformed row '" + t + "'");
    }
    header_allowed = false;
    rows.push_back(sample);
  }
  if (rows.empty()) {
    throw DataError(path + ": no data rows");
  }
  return rows;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out.good()) throw DataError("failed writing file '" + path + "'");
}

}  // namespace spinemech
