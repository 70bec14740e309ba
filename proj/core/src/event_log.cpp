#include "edgetrack/event_log.hpp"

#include <sstream>
#include <stdexcept>

namespace edgetrack {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Activation: return "activation";
    case EventKind::Frame: return "frame";
    case EventKind::SuspectAdded: return "suspect_added";
    case EventKind::SuspectDropped: return "suspect_dropped";
    case EventKind::Confirm: return "confirm";
    case EventKind::BranchSpawn: return "branch_spawn";
    case EventKind::BranchTerminate: return "branch_terminate";
    case EventKind::VoiExit: return "voi_exit";
    case EventKind::RunError: return "run_error";
  }
  return "?";
}

void TrackingEventLog::append(LogEvent event) {
  if (!events_.empty() && event.time < events_.back().time - 1e-9)
    throw std::logic_error("event log timestamps must be non-decreasing");
  events_.push_back(std::move(event));
}

std::string to_line(const LogEvent& e) {
  std::ostringstream out;
  out << format_seconds(e.time, 6) << '\t' << to_string(e.kind) << '\t' << e.voi << '\t' << e.branch
      << '\t' << e.node << '\t';
  switch (e.kind) {
    case EventKind::Activation:
      out << "window=[" << format_seconds(e.window_start, 6) << ',' << format_seconds(e.window_end, 6)
          << "] case=" << e.text;
      break;
    case EventKind::Frame:
      out << "n=" << e.detected << " model=" << e.model_tasks << " full=" << e.full_tasks
          << " crowded=" << (e.crowded ? 1 : 0) << " cost=" << format_seconds(e.exec_cost, 6);
      break;
    case EventKind::SuspectAdded:
    case EventKind::SuspectDropped:
      out << "plate=" << e.text;
      break;
    case EventKind::Confirm:
      out << "plate=" << e.text << " arrival=" << format_seconds(e.arrival, 6)
          << " completion=" << format_seconds(e.completion, 6);
      break;
    case EventKind::BranchSpawn:
      out << "to=" << e.text << " window=[" << format_seconds(e.window_start, 6) << ','
          << format_seconds(e.window_end, 6) << ']';
      break;
    case EventKind::BranchTerminate:
    case EventKind::VoiExit:
    case EventKind::RunError:
      out << e.text;
      break;
  }
  return out.str();
}

std::string TrackingEventLog::to_text() const {
  std::ostringstream out;
  out << "# time\tkind\tvoi\tbranch\tnode\tpayload\n";
  for (const LogEvent& e : events_) out << to_line(e) << '\n';
  return out.str();
}

}  // namespace edgetrack
