#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pseudohopf/io.hpp"

namespace pseudohopf {

// One verifiable row of the leading-law table, bound to a gallery system.
struct TableRowSpec {
    std::string id;
    std::string system;
    Params params;
    Grid grid;
    CompareTolerances tolerances;
};

const std::vector<TableRowSpec>& table_rows();

struct LawCheck {
    SymbolicLaw table;
    std::optional<AsymptoticLaw> predicted;
    std::optional<FitResult> fitted;
    std::optional<LawFamily> classified;
    std::vector<Verdict> checks;
    bool pass = false;
};

struct TableRowResult {
    TableRowSpec spec;
    std::string label;  // e.g. "N-focus/Fold"
    bool errored = false;
    std::string error;
    LawCheck period;
    LawCheck position;
    std::vector<std::string> notes;
    bool pass = false;
};

TableRowResult run_table_row(const TableRowSpec& spec, double fit_window_fraction = 0.5, int threads = 0);

// Selects rows by id; unknown ids throw ConfigError. Empty selects all.
std::vector<TableRowSpec> select_rows(const std::vector<std::string>& ids);

Json to_json(const TableRowResult& row);
std::string table_csv(const std::vector<TableRowResult>& rows);
std::string render_table(const std::vector<TableRowResult>& rows);

}  // namespace pseudohopf
