// Copyright 2026 The Modelwright Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "modelwright/pipeline/data.h"

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "modelwright/common/status.h"
#include "modelwright/common/strings.h"

namespace modelwright::pipeline {
namespace {

absl::Status BadSelector(const std::string& message) {
  return MakeError(ErrorKind::kBadSelector, message);
}

std::string BaseName(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

absl::StatusOr<Rational> CellValue(const std::string& cell,
                                   const std::string& where) {
  std::optional<Rational> value = ParseRational(Trim(cell));
  if (!value.has_value()) {
    return BadSelector(absl::StrCat(where, " is not a number"));
  }
  return *value;
}

absl::StatusOr<std::vector<Rational>> ColumnValues(const DataTable& table,
                                                   std::size_t col) {
  std::vector<Rational> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    MW_ASSIGN_OR_RETURN(
        Rational v,
        CellValue(table.rows[r][col], absl::StrCat("row ", r + 1, " of column ",
                                                  table.columns[col])));
    out.push_back(std::move(v));
  }
  return out;
}

std::string JsonCell(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) {
    // Shortest round-trip text for the stored double.
    std::optional<Rational> r = RationalFromDouble(v.get<double>());
    return r.has_value() ? FormatRational(*r) : v.dump();
  }
  return v.dump();
}

}  // namespace

absl::StatusOr<DataTable> ParseCsv(std::string_view text) {
  if (StartsWith(text, "\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = record.size() == 1 && Trim(record[0]).empty();
    if (!blank) records.push_back(std::move(record));
    record.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      end_record();
    } else {
      field += c;
      if (c != ' ' && c != '\t') field_started = true;
    }
  }
  if (in_quotes) {
    return MakeError(ErrorKind::kBadSelector, "CSV has an unterminated quote");
  }
  if (!field.empty() || !record.empty()) end_record();
  if (records.empty()) {
    return MakeError(ErrorKind::kBadSelector, "CSV file has no header row");
  }
  DataTable table;
  for (const std::string& name : records[0]) table.columns.push_back(Trim(name));
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.columns.size()) {
      return MakeError(ErrorKind::kBadSelector,
                       absl::StrCat("CSV row ", r, " has ", records[r].size(),
                                    " fields; the header has ",
                                    table.columns.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

absl::StatusOr<DataTable> ParseJsonData(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    return MakeError(ErrorKind::kBadSelector, "data file is not valid JSON");
  }
  DataTable table;
  if (doc.is_number() || doc.is_string()) {
    table.columns = {"value"};
    table.rows = {{JsonCell(doc)}};
    return table;
  }
  if (doc.is_array()) {
    for (const nlohmann::json& row : doc) {
      if (!row.is_object()) {
        return MakeError(ErrorKind::kBadSelector,
                         "JSON row lists must contain objects");
      }
      for (const auto& [key, value] : row.items()) {
        if (std::find(table.columns.begin(), table.columns.end(), key) ==
            table.columns.end()) {
          table.columns.push_back(key);
        }
      }
    }
    for (const nlohmann::json& row : doc) {
      std::vector<std::string> cells;
      for (const std::string& col : table.columns) {
        cells.push_back(row.contains(col) ? JsonCell(row[col]) : "");
      }
      table.rows.push_back(std::move(cells));
    }
    return table;
  }
  if (!doc.is_object()) {
    return MakeError(ErrorKind::kBadSelector, "unsupported JSON data shape");
  }
  bool columnar = !doc.empty();
  std::size_t length = 0;
  bool first = true;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_array() || (!first && value.size() != length)) {
      columnar = false;
      break;
    }
    length = value.size();
    first = false;
  }
  for (const auto& [key, value] : doc.items()) table.columns.push_back(key);
  if (columnar) {
    table.rows.assign(length, {});
    for (const auto& [key, value] : doc.items()) {
      for (std::size_t r = 0; r < length; ++r) {
        table.rows[r].push_back(JsonCell(value[r]));
      }
    }
  } else {
    std::vector<std::string> cells;
    for (const auto& [key, value] : doc.items()) {
      if (value.is_array() || value.is_object()) {
        return MakeError(ErrorKind::kBadSelector,
                         "JSON columns must be arrays of equal length");
      }
      cells.push_back(JsonCell(value));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

absl::StatusOr<DataTable> ParseDataFile(const std::string& path,
                                        std::string_view contents) {
  const std::string lower = ToLower(path);
  if (EndsWith(lower, ".csv")) return ParseCsv(contents);
  if (EndsWith(lower, ".json")) return ParseJsonData(contents);
  return MakeError(ErrorKind::kBadSelector,
                   absl::StrCat("unsupported data file type: ", path));
}

absl::StatusOr<ParamValue> SelectValue(const DataTable& table,
                                       const FileReference& ref) {
  std::optional<std::size_t> col;
  if (ref.column.has_value()) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (table.columns[c] == *ref.column) col = c;
    }
    if (!col.has_value()) {
      return BadSelector(absl::StrCat(ref.path, " has no column '",
                                      *ref.column, "'"));
    }
  }
  if (ref.row.has_value() &&
      (*ref.row < 1 || static_cast<std::size_t>(*ref.row) > table.rows.size())) {
    return BadSelector(absl::StrCat(ref.path, " has no row ", *ref.row,
                                    " (it has ", table.rows.size(), ")"));
  }
  if (col.has_value() && ref.row.has_value()) {
    MW_ASSIGN_OR_RETURN(
        Rational v,
        CellValue(table.rows[*ref.row - 1][*col],
                  absl::StrCat(ref.path, " row ", *ref.row, " column ",
                               *ref.column)));
    return ParamValue(std::move(v));
  }
  if (col.has_value()) {
    MW_ASSIGN_OR_RETURN(std::vector<Rational> values, ColumnValues(table, *col));
    return ParamValue(std::move(values));
  }
  if (ref.row.has_value()) {
    std::vector<Rational> values;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      MW_ASSIGN_OR_RETURN(
          Rational v, CellValue(table.rows[*ref.row - 1][c],
                                absl::StrCat(ref.path, " row ", *ref.row,
                                             " column ", table.columns[c])));
      values.push_back(std::move(v));
    }
    return ParamValue(std::move(values));
  }
  if (table.columns.size() == 1) {
    MW_ASSIGN_OR_RETURN(std::vector<Rational> values, ColumnValues(table, 0));
    if (values.size() == 1) return ParamValue(values[0]);
    return ParamValue(std::move(values));
  }
  ParamTable out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    MW_ASSIGN_OR_RETURN(out[table.columns[c]], ColumnValues(table, c));
  }
  return ParamValue(std::move(out));
}

absl::StatusOr<ProblemIR> BindData(const ProblemIR& problem,
                                   const FileContents& files) {
  ParamValues values;
  std::map<std::string, DataTable> parsed;
  for (const DataBinding& binding : problem.bindings) {
    const auto* ref = std::get_if<FileReference>(&binding.source);
    if (ref == nullptr) continue;
    auto file = files.find(ref->path);
    if (file == files.end()) file = files.find(BaseName(ref->path));
    if (file == files.end()) {
      return MakeError(ErrorKind::kMissingFile,
                       absl::StrCat("data file '", ref->path,
                                    "' for parameter ", binding.parameter,
                                    " has not been provided"));
    }
    auto it = parsed.find(file->first);
    if (it == parsed.end()) {
      MW_ASSIGN_OR_RETURN(DataTable table,
                          ParseDataFile(file->first, file->second));
      it = parsed.emplace(file->first, std::move(table)).first;
    }
    MW_ASSIGN_OR_RETURN(values[binding.parameter], SelectValue(it->second, *ref));
  }
  return SubstituteParameters(problem, values);
}

}  // namespace modelwright::pipeline
