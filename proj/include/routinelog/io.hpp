#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "routinelog/core.hpp"
#include "routinelog/metrics.hpp"
#include "routinelog/petri_net.hpp"

namespace routinelog {

// ---------------------------------------------------------------------------
// CSV (RFC 4180: comma separated, double-quoted fields, "" escapes a quote)
// ---------------------------------------------------------------------------

using CsvRow = std::vector<std::string>;

/// Parses a whole CSV document. Throws Error naming the 1-based line when a
/// quoted field is unterminated. CRLF and LF line endings are accepted; blank
/// lines are skipped.
std::vector<CsvRow> parse_csv(std::istream& in);

std::string csv_field(std::string_view value);
void write_csv_row(std::ostream& out, std::span<const std::string> fields);

// ---------------------------------------------------------------------------
// UI logs
// ---------------------------------------------------------------------------

struct UILogData {
  UILog log;
  ActionAlphabet alphabet;
  /// Per-row values of the optional "case" column.
  std::vector<std::string> case_ids;
  /// Rows grouped by equal case id, groups in order of first appearance.
  /// Used only as evaluation ground truth.
  std::optional<ExecutionMultiset> ground_truth;
};

struct UILogReadOptions {
  /// Starting alphabet. Extended with unseen labels unless `frozen`.
  std::optional<ActionAlphabet> alphabet;
  bool frozen = false;
};

/// Reads a UI log with header `timestamp,user,action[,case]` (only "action"
/// is required; timestamps and users are discarded).
UILogData read_ui_log(std::istream& in, const UILogReadOptions& options = {});
UILogData read_ui_log(const std::filesystem::path& path, const UILogReadOptions& options = {});

/// Writes `timestamp,user,action[,case]` rows. Timestamps are synthetic,
/// one second apart; `case_ids` (if nonempty) must have one entry per action.
void write_ui_log(std::ostream& out, const UILog& log, const ActionAlphabet& alphabet,
                  std::span<const std::string> case_ids = {}, std::string_view user = "user1");
void write_ui_log(const std::filesystem::path& path, const UILog& log,
                  const ActionAlphabet& alphabet, std::span<const std::string> case_ids = {});

/// Segments as rows `case,action` with case ids `e<j>`.
void write_executions(std::ostream& out, const ExecutionMultiset& executions,
                      const ActionAlphabet& alphabet);

// ---------------------------------------------------------------------------
// PNML
// ---------------------------------------------------------------------------

/// Reads the first net of a PNML document. Transitions without a name text,
/// with an empty one, or flagged `activity="$invisible$"` are silent. When
/// the document has no final marking, the unique sink place carries one
/// token; anything else is an error.
PetriNet read_pnml(std::istream& in);
PetriNet read_pnml(const std::filesystem::path& path);

void write_pnml(std::ostream& out, const PetriNet& net);
void write_pnml(const std::filesystem::path& path, const PetriNet& net);

// ---------------------------------------------------------------------------
// Action-set files: JSON object {type_name: [labels]}; key order is kept.
// ---------------------------------------------------------------------------

GroundTruthActionSets read_action_sets(std::istream& in, const ActionAlphabet& alphabet);
GroundTruthActionSets read_action_sets(const std::filesystem::path& path,
                                       const ActionAlphabet& alphabet);
void write_action_sets(std::ostream& out, const GroundTruthActionSets& sets,
                       const ActionAlphabet& alphabet);

// ---------------------------------------------------------------------------
// Routine logs
// ---------------------------------------------------------------------------

struct RoutineLogWriteOptions {
  /// Also emit XES-compatible XML next to each CSV.
  bool xes = false;
};

/// Writes routine_log_<i>.csv (`case,action`, case ids c<i>_e<j>) for every
/// cluster, header only for empty ones, plus manifest.json listing each
/// file with its execution count and an `empty` flag. Returns the CSV paths.
std::vector<std::filesystem::path> write_routine_logs(const ClusterSet& clusters,
                                                      const ActionAlphabet& alphabet,
                                                      const std::filesystem::path& directory,
                                                      const RoutineLogWriteOptions& options = {});

/// Reads a directory produced by write_routine_logs back into a ClusterSet
/// (assignment follows file order). New labels extend `alphabet`.
ClusterSet read_routine_logs(const std::filesystem::path& directory, ActionAlphabet& alphabet);

// ---------------------------------------------------------------------------
// Evaluation reports
// ---------------------------------------------------------------------------

/// `log,technique,clusterer,noise_level,repetition,jc,fitness,empty_pct,
/// n_clusters,runtime_ms,status`; failed metrics are written as empty fields.
void write_report(std::ostream& out, std::span<const EvalRecord> records);
std::vector<EvalRecord> read_report(std::istream& in);

/// Shortest round-trip decimal representation; empty for NaN.
std::string format_double(double v);

}  // namespace routinelog
