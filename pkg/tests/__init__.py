"""
Test Suite for Attack Tree Checker
Run with: pytest tests/
"""
