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

// Deterministic CSV output and torque-log ingestion. Floating-point cells
// are written with 17 significant digits (value-preserving round trip),
// lines end with LF, and every file starts with a provenance comment
// `# spine-mech <version> <command> <config hash>`.

#ifndef SPINEMECH_CSV_HPP
#define SPINEMECH_CSV_HPP

#include <string>
#include <vector>

#include "spinemech/sweep.hpp"
#include "spinemech/transition.hpp"

namespace spinemech {

// 17-significant-digit representation; parses back to the same double.
std::string format_double(double v);

std::string provenance_line(const std::string& command,
                            const std::string& config_hash);

// theta_rad,contraction_mm,jacobian_mm_per_rad,Fs_single_N,Fs_total_N,tau_s_Nmm
std::string tum_curve_csv(const TumSpec& spec, const std::vector<double>& thetas,
                          const std::string& provenance);

// X_mm,theta1_rad,theta2_rad,Jg_rad_per_mm
std::string linkage_curve_csv(const LinkageSpec& spec,
                              const std::vector<double>& contractions,
                              const std::string& provenance);

// t_s,theta_input_rad,theta_twist_rad,theta_body_rad,X_mm,theta2_rad,
// tau_transmitted_Nmm,grasp_torque_Nmm,phase
std::string trace_csv(const SimTrace& trace, const std::string& provenance);

// candidate_index, echoed parameters, status and metric columns.
std::string reports_csv(const std::vector<DesignReport>& reports,
                        const std::string& provenance);

// theta_rad,J_exp_mm_per_rad,J_model_mm_per_rad,rel_err — plus a
// `# fitted_offset_Nmm <value>` comment after the provenance line.
std::string analysis_csv(const std::vector<JacobianSample>& samples,
                         const TumSpec& spec, double fitted_offset,
                         const std::string& provenance);

// Reads a drive log: rows `theta_rad,tau_in_Nmm`, one optional header line,
// `#` comment lines skipped. Malformed content throws DataError with the
// 1-based line number; an empty log (no data rows) is also a DataError.
std::vector<LogSample> read_torque_log(const std::string& path);

// Writes bytes exactly as given (binary mode). Throws DataError on failure.
void write_file(const std::string& path, const std::string& bytes);

}  // namespace spinemech

#endif  // SPINEMECH_CSV_HPP
