#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dip/message.hpp"
#include "dip/order.hpp"
#include "dip/state.hpp"

namespace dip::detect {

// Per (power, turn) record of orders submitted before any communication
// (initial intents) and at turn close (finals).
struct LedgerEntry {
  std::vector<Order> initial;
  std::vector<Order> final_orders;
};

struct IntentLedger {
  std::map<std::pair<Power, std::string>, LedgerEntry> entries;

  LedgerEntry& at(Power p, const TurnId& turn) {
    return entries[{p, turn.key()}];
  }
  const LedgerEntry* find(Power p, const TurnId& turn) const {
    auto it = entries.find({p, turn.key()});
    return it == entries.end() ? nullptr : &it->second;
  }
};

enum class EventKind {
  BrokenCommitment,
  PersuasionAttempt,
  PersuasionSuccess,
};

struct DetectionEvent {
  EventKind kind{};
  std::string message_id;
  Power sender{};
  Power recipient{};
  Order action;
  bool verdict = false;

  bool operator==(const DetectionEvent&) const = default;
};

// Eq. 1: 1 iff the communicated action is absent from the finals
// (coast-normalized membership).
int broken_commitment(const Order& a_msg, const std::vector<Order>& finals);

// Eq. 2: 1 iff the suggested action is in the finals and not in the intents.
int persuasion(const std::vector<Order>& intents, const Order& a_msg,
               const std::vector<Order>& finals);

struct MissingLedgerEntry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TurnMessage {
  std::string id;
  Power sender{};
  Power recipient{};
  std::vector<msg::CommunicativeAct> acts;  // grounded
};

// Commitments/agreements feed Eq. 1 against the sender's finals; proposals
// feed Eq. 2 against the recipient's ledger. Conditional acts and third-party
// reports are skipped. Throws MissingLedgerEntry.
std::vector<DetectionEvent> scan_turn(const std::vector<TurnMessage>& messages,
                                      const IntentLedger& ledger,
                                      const TurnId& turn);

struct Confusion {
  long long tp = 0, fn = 0, fp = 0, tn = 0;
  double precision = 0.0;  // 0/0 defined as 0
  double recall = 0.0;
};

Confusion confusion_from_counts(long long tp, long long fn, long long fp,
                                long long tn);

// Message-level evaluation: a message is predicted positive when any of its
// broken-commitment events has a true verdict; every gold-labeled message is
// counted.
Confusion confusion(const std::vector<DetectionEvent>& events,
                    const std::map<std::string, bool>& gold);

}  // namespace dip::detect
