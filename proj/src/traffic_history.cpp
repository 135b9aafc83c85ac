#include "portwar/traffic_history.hpp"

namespace portwar {

TrafficHistory::TrafficHistory(int n_ports, int n_ips, int window)
    : n_ports_(n_ports),
      n_ips_(n_ips),
      window_(window),
      port_total_(static_cast<std::size_t>(n_ports), 0),
      ip_total_(static_cast<std::size_t>(n_ips), 0),
      port_ip_total_(static_cast<std::size_t>(n_ports) * static_cast<std::size_t>(n_ips), 0) {}

void TrafficHistory::apply(const std::vector<Flow>& flows, long sign) {
    for (const auto& f : flows) {
        const long n = sign * f.attempted;
        port_total_[static_cast<std::size_t>(f.port)] += n;
        ip_total_[static_cast<std::size_t>(f.ip)] += n;
        port_ip_total_[static_cast<std::size_t>(f.port * n_ips_ + f.ip)] += n;
        if (f.benign) {
            benign_generated_ += n;
            benign_dropped_ += sign * f.dropped;
        }
    }
}

void TrafficHistory::push(std::vector<Flow> step_flows) {
    apply(step_flows, +1);
    steps_.push_back(std::move(step_flows));
    while (steps_.size() > static_cast<std::size_t>(window_)) {
        apply(steps_.front(), -1);
        steps_.pop_front();
    }
}

}  // namespace portwar
