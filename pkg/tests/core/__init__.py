"""Tests for app.core"""
