"""Test suite for exchange rate extraction."""

