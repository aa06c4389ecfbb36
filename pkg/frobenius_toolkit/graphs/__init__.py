"""Graph machinery: matchings, form graphs, local rings and DOT output."""
