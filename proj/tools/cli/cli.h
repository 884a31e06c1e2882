#ifndef QINI_TOOLS_CLI_H_
#define QINI_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "csv.h"
#include "qini/frame.h"

namespace qini::cli {

// Exit codes of the qini_path binary.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitMalformedCsv = 2;
inline constexpr int kExitConstraint = 3;
inline constexpr int kExitDegenerateComparison = 4;

// Builds an EvalFrame from columns tau_k, cost_k and score_k for k = 1..K.
// tau{k}_true and c{k} are accepted in place of tau_k and cost_k so that
// simulated data feeds straight in. K is inferred from the longest run of
// tau columns unless `num_arms` > 0. An optional unit_id column sets unit
// ids. Throws CsvError naming the first missing column.
EvalFrame LoadFrame(const CsvTable& table, int num_arms = 0);

// Entry point shared by the binary and the tests. Never throws; maps
// CsvError to exit 2 and constraint violations to exit 3.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace qini::cli

#endif  // QINI_TOOLS_CLI_H_
