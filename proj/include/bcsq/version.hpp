#pragma once

#define BCSQ_VERSION "0.1.0"
