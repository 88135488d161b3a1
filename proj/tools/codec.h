// Copyright 2026 The framex Authors.
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

#ifndef FRAMEX_TOOLS_CODEC_H_
#define FRAMEX_TOOLS_CODEC_H_

// JSON decoding of inputs and encoding of results for the job runner.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "framex/extraction.h"
#include "framex/frames.h"
#include "framex/pointsets.h"
#include "framex/sampling.h"
#include "framex/selectors.h"
#include "framex/timefreq.h"

namespace framex::tools {

using Json = nlohmann::ordered_json;

// Throws ParseError on malformed documents.
Json ReadJsonFile(const std::string& path);

VectorFamily DecodeFamily(const Json& doc);
// "subspace": list of vectors; absent means the zero subspace.
Projection DecodeSubspace(const Json& doc, int dim, Field field);
std::vector<PointSet> DecodePointSets(const Json& doc);
GaborSpec DecodeGabor(const Json& doc);

Json Encode(const Vec& v, Field field);
Json Encode(const VectorFamily& f);
Json Encode(const FrameReport& r);
Json Encode(const Classification& c);
Json Encode(const SelectorTree& t, bool with_members);
Json Encode(const SelectorCertificate& c);
Json Encode(const DyadicDecomposition& d);
Json Encode(const PaddingSet& p);
Json Encode(const SamplingCertificate& c);
Json Encode(const ExtractionPlan& p);
Json Encode(const ExtractionResult& r);
Json Encode(const DensityEstimate& d);
Json Encode(const ClusterReport& r);

}  // namespace framex::tools

#endif  // FRAMEX_TOOLS_CODEC_H_
