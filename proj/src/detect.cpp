#include <algorithm>

#include "dip/detect.hpp"

namespace dip::detect {

namespace {

bool contains(const std::vector<Order>& set, const Order& o) {
  Order n = coast_normalized(o);
  return std::any_of(set.begin(), set.end(), [&](const Order& m) {
    return coast_normalized(m) == n;
  });
}

const LedgerEntry& require_entry(const IntentLedger& ledger, Power p,
                                 const TurnId& turn) {
  const LedgerEntry* e = ledger.find(p, turn);
  if (!e)
    throw MissingLedgerEntry("no ledger entry for " + power_code(p) + " at " +
                             turn.key());
  return *e;
}

}  // namespace

int broken_commitment(const Order& a_msg, const std::vector<Order>& finals) {
  return contains(finals, a_msg) ? 0 : 1;
}

int persuasion(const std::vector<Order>& intents, const Order& a_msg,
               const std::vector<Order>& finals) {
  return contains(finals, a_msg) && !contains(intents, a_msg) ? 1 : 0;
}

std::vector<DetectionEvent> scan_turn(const std::vector<TurnMessage>& messages,
                                      const IntentLedger& ledger,
                                      const TurnId& turn) {
  std::vector<DetectionEvent> events;
  for (const TurnMessage& msg_rec : messages) {
    for (const msg::CommunicativeAct& act : msg_rec.acts) {
      if (act.conditional) continue;
      using msg::ActKind;
      bool commits = act.kind == ActKind::Commitment ||
                     act.kind == ActKind::Agreement;
      bool proposes = act.kind == ActKind::Proposal;
      if (!commits && !proposes) continue;  // none / third-party excluded
      if (commits && act.actor != msg_rec.sender) continue;
      if (proposes && act.actor != msg_rec.recipient) continue;
      for (const Order& a : act.grounded) {
        if (commits) {
          const LedgerEntry& e =
              require_entry(ledger, msg_rec.sender, turn);
          events.push_back({EventKind::BrokenCommitment, msg_rec.id,
                            msg_rec.sender, msg_rec.recipient, a,
                            broken_commitment(a, e.final_orders) == 1});
        } else {
          const LedgerEntry& e =
              require_entry(ledger, msg_rec.recipient, turn);
          events.push_back({EventKind::PersuasionAttempt, msg_rec.id,
                            msg_rec.sender, msg_rec.recipient, a, true});
          if (persuasion(e.initial, a, e.final_orders) == 1)
            events.push_back({EventKind::PersuasionSuccess, msg_rec.id,
                              msg_rec.sender, msg_rec.recipient, a, true});
        }
      }
    }
  }
  return events;
}

Confusion confusion_from_counts(long long tp, long long fn, long long fp,
                                long long tn) {
  Confusion c{tp, fn, fp, tn, 0.0, 0.0};
  if (tp + fp > 0) c.precision = static_cast<double>(tp) / (tp + fp);
  if (tp + fn > 0) c.recall = static_cast<double>(tp) / (tp + fn);
  return c;
}

Confusion confusion(const std::vector<DetectionEvent>& events,
                    const std::map<std::string, bool>& gold) {
  std::map<std::string, bool> predicted;
  for (const DetectionEvent& e : events)
    if (e.kind == EventKind::BrokenCommitment && e.verdict)
      predicted[e.message_id] = true;
  long long tp = 0, fn = 0, fp = 0, tn = 0;
  for (const auto& [id, label] : gold) {
    bool pred = predicted.count(id) > 0;
    if (label && pred)
      ++tp;
    else if (label && !pred)
      ++fn;
    else if (!label && pred)
      ++fp;
    else
      ++tn;
  }
  return confusion_from_counts(tp, fn, fp, tn);
}

}  // namespace dip::detect
