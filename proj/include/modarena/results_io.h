// Copyright 2026 The modarena Authors
//
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

#ifndef MODARENA_RESULTS_IO_H_
#define MODARENA_RESULTS_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "modarena/evaluation.h"
#include "modarena/trainer.h"

namespace modarena {

// Per-trajectory log with columns task,seed,t,reward,success_flag. Values
// are written with round-trip precision so metrics recompute exactly.
std::string TrajectoriesToCsv(const std::vector<TrajectoryLog>& logs);
std::vector<TrajectoryLog> TrajectoriesFromCsv(const std::string& csv);

// Learning curve with columns agent,task,steps,mean_return,success_rate,seed.
std::string CurvesToCsv(const std::vector<CurveRecord>& records);
std::vector<CurveRecord> CurvesFromCsv(const std::string& csv);

// Two-panel learning-curve graphic (mean return and success rate versus
// steps per task), one series per agent kind averaged over tasks and seeds.
std::string CurvesToSvg(const std::vector<CurveRecord>& records);

std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace modarena

#endif  // MODARENA_RESULTS_IO_H_
