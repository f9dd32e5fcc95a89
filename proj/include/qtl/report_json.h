// Copyright 2026 the qtree-ladder authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QTL_REPORT_JSON_H_
#define QTL_REPORT_JSON_H_

#include <json.hpp>

#include "qtl/driver.h"
#include "qtl/trainer.h"

namespace qtl {

// JSON mirror of RunReport; the layout is documented in the README.
nlohmann::json report_to_json(const RunReport& run);
nlohmann::json model_to_json(const InferenceModel& model);

}  // namespace qtl

#endif  // QTL_REPORT_JSON_H_
