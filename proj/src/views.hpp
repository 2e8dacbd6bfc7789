#pragma once

#include "brew/http.hpp"

namespace brew::app {

void register_views(http::ViewRegistry& views);

}  // namespace brew::app
