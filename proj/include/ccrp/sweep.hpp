#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccrp/config.hpp"
#include "ccrp/optimizer.hpp"
#include "ccrp/simulator.hpp"

namespace ccrp {

enum class SweepAxis { LambdaP, LambdaE, MprStrength, PacketBits };
enum class SystemId { S1, S2, S3, Sc, Sim };

SweepAxis axis_from_name(const std::string& name);   // lambda_p | lambda_e | X | B
const char* axis_name(SweepAxis axis);
SystemId system_from_name(const std::string& name);  // S1 | S2 | S3 | Sc | SIM
const char* system_name(SystemId id);

struct SweepSpec {
    SweepAxis axis = SweepAxis::LambdaP;
    double from = 0.0;
    double to = 0.0;
    double step = 0.05;
    std::vector<SystemId> systems{SystemId::S1, SystemId::S2, SystemId::S3};

    void validate(const RunConfig& cfg) const; // ranges, step > 0, B needs physical mode
    std::vector<double> values() const;        // empty when from > to
};

struct SweepRow {
    double axis_value = 0.0;
    SystemId system = SystemId::S1;
    OptimizationResult opt;
    std::optional<SimReport> sim; // SIM rows only
};

// Evaluate every (sweep value, system) pair. Points are independent; they
// are dispatched to a small worker pool and collected in sweep order. SIM
// rows simulate the original protocol under the S3-optimal policy.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, const SweepSpec& spec);

// One CSV row per SweepRow; byte-deterministic for fixed inputs.
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

} // namespace ccrp
