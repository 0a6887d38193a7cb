"""Report writers for verdicts and search results."""
