import { ApiClient } from "./api.js"
import { initApp } from "./app.js"

const params = new URLSearchParams(location.search)
const baseUrl = params.get("api") ?? "http://127.0.0.1:8787"

const app = initApp(document.getElementById("app") ?? document.body, new ApiClient(baseUrl))
void app.start()
