import { ApiClient } from './api.js';
import { App } from './app.js';

const params = new URLSearchParams(window.location.search);
const baseUrl =
  params.get('api') ??
  (window as { AVATARQUEST_API?: string }).AVATARQUEST_API ??
  'http://127.0.0.1:8000';

const root = document.getElementById('app');
if (!root) {
  throw new Error('missing #app mount point');
}
new App(new ApiClient(baseUrl), root).start();
