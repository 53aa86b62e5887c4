#include "awb/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace awb {
namespace {

struct Table {
    std::shared_mutex mutex;
    std::deque<std::string> names;  // deque keeps references stable
    std::unordered_map<std::string, std::uint32_t> ids;
};

Table& table() {
    static Table t;
    return t;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) {
    auto& t = table();
    {
        std::shared_lock lock(t.mutex);
        auto it = t.ids.find(std::string(name));
        if (it != t.ids.end()) return Symbol(it->second);
    }
    std::unique_lock lock(t.mutex);
    auto [it, inserted] = t.ids.emplace(std::string(name), 0);
    if (inserted) {
        it->second = static_cast<std::uint32_t>(t.names.size());
        t.names.emplace_back(name);
    }
    return Symbol(it->second);
}

bool Symbol::find(std::string_view name, Symbol& out) {
    auto& t = table();
    std::shared_lock lock(t.mutex);
    auto it = t.ids.find(std::string(name));
    if (it == t.ids.end()) return false;
    out = Symbol(it->second);
    return true;
}

const std::string& Symbol::name() const {
    auto& t = table();
    std::shared_lock lock(t.mutex);
    return t.names[id_];
}

}  // namespace awb
