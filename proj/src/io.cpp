namespace aaf {}
