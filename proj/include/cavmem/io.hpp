// io.hpp — CSV formats.
//
// Envelope:   t,re,im
// Schedule:   t,cos_theta,omega      (omega blank where cos_theta = 1)
// Sweep:      t_s,fidelity,eta,trace_out
// Mode dump:  t,abs_D,re_D,im_D,norm
// Lambda dump adds pop_e,pop_p,pop_s.
//
// Numbers are written with %.17g, so files round-trip bit exactly and output
// is byte-identical for identical inputs.

#pragma once

#include <string>
#include <vector>

#include "cavmem/bath_oracle.hpp"
#include "cavmem/storage.hpp"

namespace cavmem {

std::string format_double(double v);

PulseEnvelope read_envelope_csv(const std::string& path);
void write_envelope_csv(const std::string& path, const PulseEnvelope& h);

// Dark-amplitude trajectories share the envelope format t,re,im.
void write_trajectory_csv(const std::string& path, const DarkAmplitudeTrajectory& traj);

ControlSchedule read_schedule_csv(const std::string& path);
void write_schedule_csv(const std::string& path, const ControlSchedule& s,
                        const SystemParams& p);

void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& points);

void write_mode_trajectory_csv(const std::string& path, const ModeTrajectory& traj,
                               Eigen::Index stride = 1);
void write_lambda_trajectory_csv(const std::string& path, const LambdaTrajectory& traj,
                                 const ControlSchedule& s, Eigen::Index stride = 1);

// Generic reader: header names and numeric columns; blank cells parse as NaN.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<RealVector> columns;
};
CsvTable read_csv(const std::string& path);

}  // namespace cavmem
