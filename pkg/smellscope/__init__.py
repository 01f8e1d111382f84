"""smellscope: code and architectural smell detection correlated with reported vulnerabilities."""

__version__ = "0.1.0"
