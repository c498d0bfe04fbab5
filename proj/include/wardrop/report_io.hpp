#ifndef WARDROP_REPORT_IO_HPP
#define WARDROP_REPORT_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "wardrop/sensitivity.hpp"
#include "wardrop/solver.hpp"

namespace wardrop {

/// Fixed column order:
///   step,multiplier,ue_cost,so_cost,poa,poa_ratio,thm5_lo_slack,thm5_hi_slack,
///   thm6_lo_slack,thm6_hi_slack,thm7_lo_slack,thm7_hi_slack,dafermos_lhs
/// Reals carry 12 significant digits; NaN fields (step 0) are left empty.
/// Byte output is deterministic for identical records.
void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out);

extern const char* const kSweepCsvHeader;

/// Array of objects mirroring the CSV columns one-to-one (NaN -> null).
nlohmann::json sweep_to_json(const std::vector<SweepRecord>& records);

nlohmann::json bound_report_to_json(const BoundReport& report);
std::string bound_report_table(const BoundReport& report);

nlohmann::json solution_to_json(const Solution& solution, const Instance& instance,
                                Objective objective);

}  // namespace wardrop

#endif
