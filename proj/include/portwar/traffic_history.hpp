#pragma once

#include <cstddef>
#include <deque>
#include <vector>

namespace portwar {

/// Aggregated requests from one IP to one port during one timestep.
struct Flow {
    int ip = 0;
    int port = 0;
    int attempted = 0;
    int dropped = 0;
    bool benign = true;

    bool operator==(const Flow&) const = default;
};

/// Trailing window of per-step flows with running totals, so the defender's
/// windowed statistics cost O(ports * ips) to read instead of O(window).
class TrafficHistory {
public:
    TrafficHistory() = default;
    TrafficHistory(int n_ports, int n_ips, int window);

    /// Appends one timestep and evicts the oldest once the window is exceeded.
    void push(std::vector<Flow> step_flows);

    std::size_t depth() const { return steps_.size(); }
    int window() const { return window_; }

    long port_requests(int port) const { return port_total_[static_cast<std::size_t>(port)]; }
    long port_ip_requests(int port, int ip) const {
        return port_ip_total_[static_cast<std::size_t>(port * n_ips_ + ip)];
    }
    long ip_requests(int ip) const { return ip_total_[static_cast<std::size_t>(ip)]; }
    long benign_generated() const { return benign_generated_; }
    long benign_dropped() const { return benign_dropped_; }

    bool operator==(const TrafficHistory&) const = default;

private:
    void apply(const std::vector<Flow>& flows, long sign);

    int n_ports_ = 0;
    int n_ips_ = 0;
    int window_ = 1;
    std::deque<std::vector<Flow>> steps_;
    std::vector<long> port_total_;
    std::vector<long> ip_total_;
    std::vector<long> port_ip_total_;
    long benign_generated_ = 0;
    long benign_dropped_ = 0;
};

}  // namespace portwar
