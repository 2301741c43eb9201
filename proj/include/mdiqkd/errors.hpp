// Copyright 2026 The mdiqkd Authors
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

#pragma once

#include <stdexcept>

namespace mdiqkd {

/// A request exceeds a documented size cap (e.g. N! enumeration limits).
class capability_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An operation was attempted out of protocol order.
class protocol_violation : public std::logic_error {
  using std::logic_error::logic_error;
};

/// Error correction could not reconcile the keys; the session must abort.
class ec_failure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mdiqkd
