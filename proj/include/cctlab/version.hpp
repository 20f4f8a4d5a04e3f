#pragma once

// Bumping the version invalidates every cached report.
#define CCTLAB_VERSION "0.1.0"
