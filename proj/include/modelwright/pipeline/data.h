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

#ifndef MODELWRIGHT_PIPELINE_DATA_H_
#define MODELWRIGHT_PIPELINE_DATA_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "modelwright/ir/parameters.h"
#include "modelwright/ir/problem.h"

namespace modelwright::pipeline {

// Header plus rows of raw cell text.
struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Comma-separated, header row first, RFC 4180 quoting, optional UTF-8 BOM.
absl::StatusOr<DataTable> ParseCsv(std::string_view text);

// A column map {"c": [..]}, a list of row objects, a single row object, or a
// bare number (column "value").
absl::StatusOr<DataTable> ParseJsonData(std::string_view text);

// Dispatches on the .csv / .json extension.
absl::StatusOr<DataTable> ParseDataFile(const std::string& path,
                                        std::string_view contents);

// Applies a FileReference selector: column+row gives a scalar, column a
// vector, row a vector across columns; no selector gives a scalar for a 1x1
// file, a vector for one column, otherwise a table. Errors: BadSelector.
absl::StatusOr<ParamValue> SelectValue(const DataTable& table,
                                       const FileReference& ref);

using FileContents = std::map<std::string, std::string>;

// Resolves every file binding against `files` (keyed by path, falling back
// to the base name) and substitutes all parameters. Errors: MissingFile,
// BadSelector, MissingParameter, DimensionMismatch.
absl::StatusOr<ProblemIR> BindData(const ProblemIR& problem,
                                   const FileContents& files);

}  // namespace modelwright::pipeline

#endif  // MODELWRIGHT_PIPELINE_DATA_H_
