// Copyright 2026 The relmtl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RELMTL_CHECKPOINT_HPP_
#define RELMTL_CHECKPOINT_HPP_

#include <iosfwd>
#include <optional>

#include "relmtl/multitask.hpp"

// Model checkpoint, text format version 1:
//
//   relmtl-checkpoint 1
//   input_dim <n>
//   train batch_size <b> epochs <e> patience <p> seed <s> learning_rate <lr> rho <r> epsilon <eps>
//   trunk <count>
//   <layer block> x count
//   heads <count>
//   <layer block> x count
//   end
//
// where a layer block is
//
//   layer <activation> <out_dim> <in_dim>
//   optimizer <learning_rate> <rho> <epsilon>
//   weights <out_dim*in_dim values, row-major>
//   biases <out_dim values>
//   cache_weights <out_dim*in_dim values>
//   cache_biases <out_dim values>
//
// Reals are written in shortest round-trip form, so save/load is bit-exact.
// The `train` line is optional.
namespace relmtl::mtl {

struct Checkpoint {
  MultiTaskModel model;
  std::optional<TrainConfig> config;
};

inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(std::ostream& out, const MultiTaskModel& model,
                     const std::optional<TrainConfig>& config = std::nullopt);

/// Throws FormatError (with line number) on malformed input.
Checkpoint load_checkpoint(std::istream& in);

}  // namespace relmtl::mtl

#endif  // RELMTL_CHECKPOINT_HPP_
