#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace tristage {

// One protocol event. The observable part is exactly what a wiretap on that
// link would see: ciphertext bits on insecure classical links, an opaque
// marker for a qubit in flight, nothing on secure links. Ground truth
// (keys, plaintext, amplitudes) lives in `hidden` and is never serialized.
struct TranscriptEvent {
  int step = 0;
  std::string from;
  std::string to;
  bool secure = false;
  std::string observable;
  std::string note;
  std::string hidden;

  nlohmann::json record() const {
    return nlohmann::json{
        {"step", step}, {"link_from", from}, {"link_to", to}, {"secure", secure}, {"observable", observable}, {"note", note}};
  }

  std::string link_id() const { return from + "->" + to; }
  bool is_stage() const { return note.rfind("stage", 0) == 0; }
};

struct Transcript {
  std::vector<TranscriptEvent> events;

  void add(TranscriptEvent e) { events.push_back(std::move(e)); }

  int insecure_stage_count() const {
    int n = 0;
    for (const auto& e : events)
      if (!e.secure && e.is_stage()) ++n;
    return n;
  }

  // One structured-text record per event, line-delimited.
  std::string to_jsonl() const {
    std::string out;
    for (const auto& e : events) {
      out += e.record().dump();
      out += '\n';
    }
    return out;
  }
};

// FNV-1a 64. A reproducibility fingerprint for transcripts, not a
// cryptographic hash.
inline std::uint64_t fnv1a64(const std::string& data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string digest_hex(std::uint64_t h) {
  static const char* hexd = "0123456789abcdef";
  std::string s = "fnv1a64:";
  for (int i = 60; i >= 0; i -= 4) s += hexd[(h >> i) & 0xF];
  return s;
}

}  // namespace tristage
