# Tests for strathom
