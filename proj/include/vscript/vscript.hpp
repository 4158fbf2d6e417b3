#pragma once

// Everything except the HTTP layers (remote_backend, backend_server, api_server),
// which pull in httplib and are included on demand.

#include "vscript/backend.hpp"
#include "vscript/config.hpp"
#include "vscript/dialogue_gen.hpp"
#include "vscript/domain.hpp"
#include "vscript/error.hpp"
#include "vscript/json_io.hpp"
#include "vscript/lexicon.hpp"
#include "vscript/metrics.hpp"
#include "vscript/mock_backend.hpp"
#include "vscript/pipeline.hpp"
#include "vscript/plot_gen.hpp"
#include "vscript/scene_gen.hpp"
#include "vscript/segment.hpp"
#include "vscript/session.hpp"
#include "vscript/text.hpp"
#include "vscript/video_store.hpp"
