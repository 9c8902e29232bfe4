// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Routing, code construction and syndrome-extraction compilation for
//! hierarchical quantum memories, with the closed-form failure-rate models
//! used to compare them against plain surface-code storage.

pub mod bilayer;
pub mod bits;
pub mod circuits;
pub mod codes;
pub mod estimator;
pub mod graphs;
pub mod par;
pub mod pauli;
pub mod routing;
