// Copyright 2026 The pq5g Authors
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

#pragma once

#include <string>
#include <vector>

namespace pq5g::ue {

// Workflow step tags, one ordered transcript per UE.
enum class StepTag {
  kRegistered,
  kSessionEstablished,
  kKeypairGenerated,
  kHelloSent,
  kHelloReceived,
  kSecretEncapsulated,
  kSecretDecapsulated,
  kScheduleDerived,
  kCertificatesVerified,
  kHandshakeComplete,
  kMessageSent,
  kMessageReceived,
};

inline const char* step_name(StepTag tag) {
  switch (tag) {
    case StepTag::kRegistered: return "Registered";
    case StepTag::kSessionEstablished: return "SessionEstablished";
    case StepTag::kKeypairGenerated: return "KeypairGenerated";
    case StepTag::kHelloSent: return "HelloSent";
    case StepTag::kHelloReceived: return "HelloReceived";
    case StepTag::kSecretEncapsulated: return "SecretEncapsulated";
    case StepTag::kSecretDecapsulated: return "SecretDecapsulated";
    case StepTag::kScheduleDerived: return "ScheduleDerived";
    case StepTag::kCertificatesVerified: return "CertificatesVerified";
    case StepTag::kHandshakeComplete: return "HandshakeComplete";
    case StepTag::kMessageSent: return "MessageSent";
    case StepTag::kMessageReceived: return "MessageReceived";
  }
  return "?";
}

struct Event {
  StepTag tag;
  uint64_t t_us;
  std::string detail;
};

using EventTranscript = std::vector<Event>;

inline bool transcript_reaches(const EventTranscript& transcript, StepTag tag) {
  for (const auto& e : transcript)
    if (e.tag == tag) return true;
  return false;
}

// True when `expected` appears as a subsequence of the transcript's tags.
inline bool transcript_orders(const EventTranscript& transcript,
                              const std::vector<StepTag>& expected) {
  size_t need = 0;
  for (const auto& e : transcript) {
    if (need < expected.size() && e.tag == expected[need]) need++;
  }
  return need == expected.size();
}

// The workflow sequence each role must produce, in order.
inline std::vector<StepTag> expected_steps(bool initiator) {
  using T = StepTag;
  if (initiator)
    return {T::kRegistered,         T::kSessionEstablished, T::kKeypairGenerated,
            T::kHelloSent,          T::kHelloReceived,      T::kSecretDecapsulated,
            T::kScheduleDerived,    T::kCertificatesVerified, T::kHandshakeComplete,
            T::kMessageSent,        T::kMessageReceived};
  return {T::kRegistered,          T::kSessionEstablished, T::kKeypairGenerated,
          T::kHelloReceived,       T::kSecretEncapsulated, T::kHelloSent,
          T::kScheduleDerived,     T::kCertificatesVerified, T::kHandshakeComplete,
          T::kMessageReceived,     T::kMessageSent};
}

// First expected step missing from the transcript; empty when all present in
// order. Used to name the failing step of an unsuccessful run.
inline std::string first_missing_step(const EventTranscript& transcript,
                                      bool initiator) {
  auto expected = expected_steps(initiator);
  size_t need = 0;
  for (const auto& e : transcript) {
    if (need < expected.size() && e.tag == expected[need]) need++;
  }
  if (need == expected.size()) return {};
  return step_name(expected[need]);
}

}  // namespace pq5g::ue
