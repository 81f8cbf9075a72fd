"""Test suite for fibrous-spaces."""
